#include "wbtree/json_report.hpp"

#include "wbtree/text.hpp"

namespace wbtree::report {

namespace {

json optional_string(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

json head_ref(const diff::HeadRef& h) {
  if (h.root) return "root";
  if (h.span) return span(*h.span);
  return nullptr;
}

}  // namespace

json span(const align::CharSpan& s) { return json::array({s.start, s.end}); }

json attachment(const eval::AttachmentReport& r) {
  return {{"token_total", r.token_total},
          {"head_correct", r.head_correct},
          {"head_and_label_correct", r.head_and_label_correct},
          {"uas", r.uas()},
          {"las", r.las()}};
}

json segmentation(const eval::SegReport& r) {
  return {{"gold_spans", r.gold_spans}, {"pred_spans", r.pred_spans}, {"matched", r.matched},
          {"precision", r.precision()}, {"recall", r.recall()},       {"f1", r.f1()}};
}

namespace {

json any_report(const std::variant<eval::AttachmentReport, eval::SegReport>& v) {
  if (const auto* a = std::get_if<eval::AttachmentReport>(&v)) return attachment(*a);
  return segmentation(std::get<eval::SegReport>(v));
}

}  // namespace

json corpus_report(const eval::CorpusReport& r) {
  json sentences = json::array();
  for (const auto& s : r.sentences) {
    json row = any_report(s.report);
    row["index"] = s.index;
    row["sent_id"] = s.sent_id;
    sentences.push_back(std::move(row));
  }
  return {{"mode", r.mode == eval::Mode::attachment ? "attachment" : "segmentation"},
          {"sentences", std::move(sentences)},
          {"summary", any_report(r.total)}};
}

json parse_diff(const diff::ParseDiff& d) {
  json edits = json::array();
  for (const auto& e : d.edits)
    edits.push_back({{"kind", diff::to_string(e.kind)},
                     {"left_ids", e.left_ids},
                     {"right_ids", e.right_ids},
                     {"span", span(e.span)}});
  json edges = json::array();
  for (const auto& c : d.edges)
    edges.push_back({{"dependent_span", span(c.dependent_span)},
                     {"left_id", c.left_id},
                     {"right_id", c.right_id},
                     {"left_head_span", head_ref(c.left_head)},
                     {"right_head_span", head_ref(c.right_head)},
                     {"left_label", optional_string(c.left_label)},
                     {"right_label", optional_string(c.right_label)},
                     {"agreement", diff::to_string(c.agreement)}});
  const auto& s = d.summary;
  return {{"text", text::encode(d.text)},
          {"edits", std::move(edits)},
          {"edges", std::move(edges)},
          {"summary",
           {{"identical", s.identical},
            {"merge", s.merge},
            {"split", s.split},
            {"divergent", s.divergent},
            {"both", s.both},
            {"head_only", s.head_only},
            {"neither", s.neither},
            {"incomparable_left", s.incomparable_left},
            {"incomparable_right", s.incomparable_right}}}};
}

json parse(const conllu::Sentence& s) {
  const auto index = align::normalized_index(s);
  json tokens = json::array();
  json edges = json::array();
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& t = s.tokens[i];
    tokens.push_back({{"id", t.id},
                      {"form", t.form},
                      {"span", span(index.spans[i])},
                      {"upos", optional_string(t.upos)},
                      {"xpos", optional_string(t.xpos)},
                      {"space_after", t.space_after()}});
    if (t.head) edges.push_back({{"dependent", t.id}, {"head", *t.head}, {"deprel", optional_string(t.deprel)}});
  }
  return {{"text", text::encode(index.chars)},
          {"raw_text", align::raw_text(s)},
          {"tokens", std::move(tokens)},
          {"edges", std::move(edges)}};
}

}  // namespace wbtree::report
