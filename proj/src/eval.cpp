#include "wbtree/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace wbtree::eval {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Union of the spans as sorted disjoint intervals (touching spans fused).
std::vector<align::CharSpan> coverage(std::span<const align::CharSpan> spans) {
  std::vector<align::CharSpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<align::CharSpan> out;
  for (const auto& s : sorted) {
    if (!out.empty() && s.start <= out.back().end)
      out.back().end = std::max(out.back().end, s.end);
    else
      out.push_back(s);
  }
  return out;
}

std::string sentence_label(const conllu::Sentence& s, std::size_t i) {
  return "sentence " + std::to_string(i) + (s.sent_id() ? " (" + *s.sent_id() + ")" : "");
}

}  // namespace

double AttachmentReport::uas() const { return ratio(head_correct, token_total); }
double AttachmentReport::las() const { return ratio(head_and_label_correct, token_total); }

AttachmentReport& AttachmentReport::operator+=(const AttachmentReport& o) {
  token_total += o.token_total;
  head_correct += o.head_correct;
  head_and_label_correct += o.head_and_label_correct;
  return *this;
}

double SegReport::precision() const { return ratio(matched, pred_spans); }
double SegReport::recall() const { return ratio(matched, gold_spans); }

double SegReport::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

SegReport& SegReport::operator+=(const SegReport& o) {
  gold_spans += o.gold_spans;
  pred_spans += o.pred_spans;
  matched += o.matched;
  return *this;
}

AttachmentReport attachment_scores(const conllu::Sentence& gold, const conllu::Sentence& pred) {
  const auto n = std::min(gold.tokens.size(), pred.tokens.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (gold.tokens[i].form != pred.tokens[i].form)
      throw EvalError("tokenization differs at token " + std::to_string(i + 1) + ": '" +
                      gold.tokens[i].form + "' vs '" + pred.tokens[i].form + "'");
  }
  if (gold.tokens.size() != pred.tokens.size())
    throw EvalError("tokenization differs at token " + std::to_string(n + 1) +
                    ": token counts " + std::to_string(gold.tokens.size()) + " vs " +
                    std::to_string(pred.tokens.size()));

  AttachmentReport r;
  r.token_total = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = gold.tokens[i];
    const auto& p = pred.tokens[i];
    if (g.head && p.head && *g.head == *p.head) {
      ++r.head_correct;
      if (g.deprel && p.deprel && *g.deprel == *p.deprel) ++r.head_and_label_correct;
    }
  }
  return r;
}

SegReport segmentation_prf(std::span<const align::CharSpan> gold,
                           std::span<const align::CharSpan> pred) {
  if (coverage(gold) != coverage(pred))
    throw EvalError("gold and predicted spans cover different characters");
  const std::set<align::CharSpan> gold_set(gold.begin(), gold.end());
  SegReport r;
  r.gold_spans = gold.size();
  r.pred_spans = pred.size();
  for (const auto& s : std::set<align::CharSpan>(pred.begin(), pred.end()))
    if (gold_set.contains(s)) ++r.matched;
  return r;
}

SegReport segmentation_prf(const conllu::Sentence& gold, const conllu::Sentence& pred) {
  const auto g = align::normalized_index(gold);
  const auto p = align::normalized_index(pred);
  if (g.chars != p.chars) {
    const auto mis = std::mismatch(g.chars.begin(), g.chars.end(), p.chars.begin(), p.chars.end());
    throw EvalError("character sequences differ at char " +
                    std::to_string(mis.first - g.chars.begin()));
  }
  return segmentation_prf(g.spans, p.spans);
}

CorpusReport corpus_eval(const conllu::Document& gold, const conllu::Document& pred, Mode mode) {
  if (gold.sentences.size() != pred.sentences.size())
    throw EvalError("sentence counts differ: " + std::to_string(gold.sentences.size()) + " vs " +
                    std::to_string(pred.sentences.size()));
  CorpusReport report;
  report.mode = mode;
  AttachmentReport att_total;
  SegReport seg_total;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& g = gold.sentences[i];
    const auto& p = pred.sentences[i];
    SentenceResult res;
    res.index = i;
    res.sent_id = g.sent_id().value_or(std::to_string(i));
    try {
      if (mode == Mode::attachment) {
        const auto r = attachment_scores(g, p);
        att_total += r;
        res.report = r;
      } else {
        const auto r = segmentation_prf(g, p);
        seg_total += r;
        res.report = r;
      }
    } catch (const std::exception& e) {
      throw EvalError(sentence_label(g, i) + ": " + e.what());
    }
    report.sentences.push_back(std::move(res));
  }
  if (mode == Mode::attachment)
    report.total = att_total;
  else
    report.total = seg_total;
  return report;
}

std::string percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", ratio * 100.0);
  return buf;
}

std::string format_report(const CorpusReport& report) {
  std::string out;
  if (const auto* a = std::get_if<AttachmentReport>(&report.total)) {
    out += "Tokens " + std::to_string(a->token_total) + "\n";
    out += "UAS " + percent(a->uas()) + "\n";
    out += "LAS " + percent(a->las()) + "\n";
  } else {
    const auto& s = std::get<SegReport>(report.total);
    out += "Gold words " + std::to_string(s.gold_spans) + "\n";
    out += "Predicted words " + std::to_string(s.pred_spans) + "\n";
    out += "Matched " + std::to_string(s.matched) + "\n";
    out += "P " + percent(s.precision()) + "\n";
    out += "R " + percent(s.recall()) + "\n";
    out += "F1 " + percent(s.f1()) + "\n";
  }
  return out;
}

}  // namespace wbtree::eval
