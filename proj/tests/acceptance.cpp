// Acceptance checks. One PASS/FAIL line per criterion; exit status 0 only if
// every criterion passes.
//
// The treebank splits are read from $UD_ZH_GSD_DIR when set
// (zh_gsdsimp-ud-{train,dev,test}.conllu). Without it the bundled
// GSD-format sample under tests/data/sample is used and every corpus line
// says so.

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "schema.hpp"
#include "support.hpp"
#include "wbtree/align.hpp"
#include "wbtree/conllu.hpp"
#include "wbtree/diff.hpp"
#include "wbtree/eval.hpp"
#include "wbtree/merge.hpp"
#include "wbtree/service.hpp"
#include "wbtree/text.hpp"

namespace fs = std::filesystem;
using namespace wbtree;
using nlohmann::json;

namespace {

constexpr double kRoundTripSeconds = 10.0;
constexpr double kAlignSeconds = 60.0;
constexpr int kAlignSentences = 1000;
constexpr int kAlignMaxChars = 8;
constexpr int kLegalityTrees = 1000;
constexpr int kLegalityMaxTokens = 7;
constexpr int kMetricCases = 1000;
constexpr int kMetricTokens = 5;
constexpr double kWorkedExampleTolerance = 1e-9;
constexpr double kRatioTolerance = 1e-12;
constexpr int kMirrorPairs = 500;
constexpr int kMergeVariants = 6;
constexpr int kCharVariants = 3;
constexpr unsigned kSeed = 20240917;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Corpus {
  std::string label;
  std::vector<std::pair<std::string, fs::path>> splits;  // train, dev, test
  std::string problem;                                   // set when files are missing

  const fs::path& dev() const { return splits[1].second; }
};

Corpus locate_corpus() {
  Corpus c;
  const char* env = std::getenv("UD_ZH_GSD_DIR");
  if (env && *env) {
    c.label = std::string("UD_ZH_GSD_DIR=") + env;
    for (const char* split : {"train", "dev", "test"}) {
      fs::path found;
      for (const char* stem : {"zh_gsdsimp-ud-", "zh_gsd-ud-"}) {
        const fs::path p = fs::path(env) / (std::string(stem) + split + ".conllu");
        if (fs::exists(p)) {
          found = p;
          break;
        }
      }
      if (found.empty()) c.problem = std::string("no ") + split + " split in " + env;
      c.splits.emplace_back(split, found);
    }
  } else {
    c.label = "bundled sample";
    for (const char* split : {"train", "dev", "test"})
      c.splits.emplace_back(split, testing::data_path(std::string("sample/") + split + ".conllu"));
  }
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

std::string last_line(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s.substr(s.rfind('\n') == std::string::npos ? 0 : s.rfind('\n') + 1);
}

std::string normalized(const conllu::Sentence& s) { return text::encode(align::normalized_index(s).chars); }

// ---------------------------------------------------------------------------

Outcome round_trip(const Corpus& c) {
  std::size_t sentences = 0, bytes = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [name, path] : c.splits) {
    const std::string raw = conllu::read_file(path);
    const auto doc = conllu::parse_document(raw, path.string());
    if (conllu::serialize_document(doc) != raw) return {false, name + " differs after re-serialization"};
    sentences += doc.sentences.size();
    bytes += raw.size();
  }
  const double secs = seconds_since(t0);
  return {secs < kRoundTripSeconds, std::to_string(sentences) + " sentences, " + std::to_string(bytes) +
                                        " bytes byte-identical in " + fixed(secs, 3) + " s (limit " +
                                        fixed(kRoundTripSeconds, 0) + " s)"};
}

Outcome validation(const Corpus& c) {
  std::string detail;
  bool pass = true;
  for (const auto& [name, path] : c.splits) {
    const auto r = testing::run_cli({"validate", path.string()});
    if (r.code != 0) pass = false;
    detail += (detail.empty() ? "" : "; ") + name + " exit " + std::to_string(r.code) + " (" + last_line(r.out) + ")";
  }
  return {pass, detail};
}

Outcome alignment_oracle() {
  oracle::Rng rng(kSeed);
  std::size_t partitions = 0, aligned = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < kAlignSentences; ++trial) {
    const int n = oracle::uniform(rng, 1, kAlignMaxChars);
    const auto chars = oracle::random_chars(rng, n);
    // every fourth sentence uses single-character fine tokens
    const auto fine_sizes = trial % 4 == 0 ? std::vector<int>(n, 1) : oracle::random_partition(rng, n);
    const auto fine_forms = oracle::cut(chars, fine_sizes);
    std::vector<int> heads(fine_forms.size(), 1);
    heads[0] = 0;
    const auto fine = testing::tree(fine_forms, heads);
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
      ++partitions;
      const auto coarse = oracle::partition_from_mask(n, mask);
      const auto want = oracle::align_oracle(fine_sizes, coarse);
      const auto got = align::align_tokenizations(fine, oracle::cut(chars, coarse));
      const auto where = "sentence " + std::to_string(trial) + ", mask " + std::to_string(mask);
      if (got.aligned() != want.aligned) return {false, where + ": aligned verdict differs"};
      if (!want.aligned) {
        if (got.status != align::AlignStatus::boundary_splits_fine_token ||
            got.position != static_cast<std::size_t>(want.first_bad_boundary))
          return {false, where + ": mismatch reported as " + got.describe()};
        continue;
      }
      ++aligned;
      if (got.groups.size() != want.groups.size()) return {false, where + ": group count differs"};
      for (std::size_t g = 0; g < want.groups.size(); ++g)
        if (got.groups[g].first != want.groups[g].first || got.groups[g].last != want.groups[g].second)
          return {false, where + ": group " + std::to_string(g) + " differs"};
    }
  }
  const double secs = seconds_since(t0);
  return {secs < kAlignSeconds, std::to_string(kAlignSentences) + " sentences, " + std::to_string(partitions) +
                                    " coarse partitions (" + std::to_string(aligned) +
                                    " aligned), all equal to the boundary-subset oracle in " + fixed(secs, 3) +
                                    " s (limit " + fixed(kAlignSeconds, 0) + " s)"};
}

Outcome legality_oracle() {
  oracle::Rng rng(kSeed + 1);
  std::size_t groups = 0, agree = 0, legal = 0;
  for (int trial = 0; trial < kLegalityTrees; ++trial) {
    const int n = oracle::uniform(rng, 1, kLegalityMaxTokens);
    const auto s = oracle::random_parse(rng, oracle::random_chars(rng, n));
    for (int f = 1; f <= n; ++f) {
      for (int l = f; l <= n; ++l) {
        ++groups;
        const auto crossing = oracle::crossing_out_edges(s, f, l);
        const auto got = merge::check_legality(s, {f, l, ""}, {});
        if (got.legal == (crossing.size() == 1) && got.external_head_members == crossing) ++agree;
        legal += got.legal;
      }
    }
  }
  return {agree == groups, std::to_string(kLegalityTrees) + " trees, " + std::to_string(agree) + "/" +
                               std::to_string(groups) + " contiguous groups agree with the crossing-edge count (" +
                               std::to_string(legal) + " legal)"};
}

// Coarse segmentations of a document plus the matching prediction file.
struct Variant {
  std::vector<std::vector<std::string>> segmented;
  conllu::Document predicted;
};

conllu::Sentence prediction(const std::vector<std::string>& forms) {
  conllu::Sentence s;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    conllu::Token t;
    t.id = static_cast<int>(i) + 1;
    t.form = forms[i];
    t.upos = "X";
    s.tokens.push_back(std::move(t));
  }
  return s;
}

/// Random merges of adjacent fine tokens (always alignable).
std::vector<std::string> coarsen(oracle::Rng& rng, const conllu::Sentence& s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    cur += text::encode(align::normalize_form(s.tokens[i].form));
    if (i + 1 == s.tokens.size() || oracle::uniform(rng, 0, 99) >= 40) {
      out.push_back(cur);
      cur.clear();
    }
  }
  return out;
}

/// Random cut of the character sequence, ignoring fine boundaries.
std::vector<std::string> recut(oracle::Rng& rng, const conllu::Sentence& s) {
  const auto chars = align::normalized_index(s).chars;
  std::vector<std::string> per_char;
  for (char32_t c : chars) per_char.push_back(text::encode(std::u32string(1, c)));
  return oracle::cut(per_char, oracle::random_partition(rng, static_cast<int>(chars.size())));
}

struct ConversionRun {
  std::vector<conllu::Document> outputs;  // one per variant
  std::string detail;
  bool pass = false;
};

ConversionRun conversion_invariants(const conllu::Document& gold) {
  ConversionRun run;
  oracle::Rng rng(kSeed + 2);

  // identity segmentation
  Variant id;
  for (const auto& s : gold.sentences) {
    id.segmented.push_back(align::forms_of(s));
    id.predicted.sentences.push_back(prediction(align::forms_of(s)));
  }
  const auto same = merge::convert_corpus(gold, id.segmented, gold, {});
  if (conllu::serialize_document(same.document) != conllu::serialize_document(gold)) {
    run.detail = "identity segmentation changed the document";
    return run;
  }

  std::vector<Variant> variants;
  for (int v = 0; v < kMergeVariants + kCharVariants; ++v) {
    Variant var;
    for (const auto& s : gold.sentences) {
      auto forms = v < kMergeVariants ? coarsen(rng, s) : recut(rng, s);
      var.predicted.sentences.push_back(prediction(forms));
      var.segmented.push_back(std::move(forms));
    }
    variants.push_back(std::move(var));
  }

  std::size_t checked = 0, merged = 0, rejected = 0, unaligned = 0;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const auto out = merge::convert_corpus(gold, variants[v].segmented, variants[v].predicted, {});
    for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
      const auto& before = gold.sentences[i];
      const auto& after = out.document.sentences[i];
      const auto& log = out.logs[i];
      const auto where = "variant " + std::to_string(v) + ", sentence " + std::to_string(i);
      if (normalized(before) != normalized(after)) {
        run.detail = where + ": characters not preserved";
        return run;
      }
      if (after.tokens.size() > before.tokens.size() ||
          (after.tokens.size() == before.tokens.size()) != (log.merged == 0)) {
        run.detail = where + ": token count not monotone";
        return run;
      }
      if (!conllu::validate_sentence(after).empty()) {
        run.detail = where + ": output fails validation";
        return run;
      }
      ++checked;
      merged += log.merged;
      rejected += log.rejected.size();
      for (const auto& note : log.notes) unaligned += note.starts_with("alignment mismatch");
    }
    conllu::parse_document(conllu::serialize_document(out.document));
    run.outputs.push_back(out.document);
  }
  run.pass = true;
  run.detail = std::to_string(gold.sentences.size()) + " sentences x " + std::to_string(variants.size()) +
               " random segmentations (" + std::to_string(checked) + " conversions, " + std::to_string(merged) +
               " merges, " + std::to_string(rejected) + " rejected groups, " + std::to_string(unaligned) +
               " unaligned); identity segmentation reproduces the input";
  return run;
}

Outcome conversion_fixtures() {
  const auto gold = conllu::read_document(testing::data_path("fixtures/gsd.conllu"));
  const auto seg = align::parse_segmented(testing::slurp(testing::data_path("fixtures/seg.txt")));
  const auto pred = conllu::read_document(testing::data_path("fixtures/pred.conllu"));
  const auto out = merge::convert_corpus(gold, seg, pred, {});
  if (conllu::serialize_document(out.document) != testing::slurp(testing::data_path("fixtures/expected.conllu")))
    return {false, "converted CoNLL-U differs from expected.conllu"};
  if (merge::format_logs(out.logs) != testing::slurp(testing::data_path("fixtures/expected.log")))
    return {false, "conversion log differs from expected.log"};

  struct Fused {
    std::size_t sentence;
    const char* form;
    const char* xpos;
    const char* head_form;
    const char* deprel;
  };
  const Fused expected[] = {{0, "中山南路", "NNP+NN+NN", "住", "obl"},
                            {1, "2004年", "CD+NNB", "出版", "obl:tmod"},
                            {2, "天文台", "NN+NN", "参观", "obj"},
                            {3, "亚热带", "JJ+NN", "气候", "nmod"},
                            {4, "医学人文博物馆", "NN+NN+NN+NN", "位于", "nsubj"}};
  for (const auto& f : expected) {
    const auto& s = out.document.sentences[f.sentence];
    const conllu::Token* tok = nullptr;
    for (const auto& t : s.tokens)
      if (t.form == f.form) tok = &t;
    if (!tok) return {false, std::string("no fused token ") + f.form};
    if (tok->xpos != f.xpos || tok->deprel != f.deprel || !tok->head || *tok->head < 1 ||
        s.tokens[*tok->head - 1].form != f.head_form)
      return {false, std::string("fused token ") + f.form + " has wrong XPOS or head"};
  }
  int merged = 0, rejected = 0;
  for (const auto& log : out.logs) merged += log.merged, rejected += static_cast<int>(log.rejected.size());
  return {true, "5 named fusions checked; 10-sentence fixture matches golden CoNLL-U and log byte-exactly (" +
                    std::to_string(merged) + " merged, " + std::to_string(rejected) + " rejected)"};
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Outcome metric_oracles(const Corpus& c) {
  oracle::Rng rng(kSeed + 3);
  for (int trial = 0; trial < kMetricCases; ++trial) {
    const int n = oracle::uniform(rng, kMetricTokens, kMetricTokens + 4);
    const auto chars = oracle::random_chars(rng, n);
    const auto forms = oracle::cut(chars, oracle::random_k_partition(rng, n, kMetricTokens));
    const auto gold = oracle::random_parse(rng, forms);
    const auto pred = oracle::random_parse(rng, forms);
    const auto want = oracle::attachment_oracle(gold, pred);
    const auto got = eval::attachment_scores(gold, pred);
    const auto where = "case " + std::to_string(trial);
    if (got.token_total != want.total || got.head_correct != want.head || got.head_and_label_correct != want.labeled)
      return {false, where + ": attachment counts differ"};
    if (!close(got.uas(), double(want.head) / want.total, kRatioTolerance) ||
        !close(got.las(), double(want.labeled) / want.total, kRatioTolerance))
      return {false, where + ": attachment ratios differ"};

    const auto other = oracle::random_parse(rng, oracle::cut(chars, oracle::random_partition(rng, n)));
    const auto gs = oracle::spans_of(gold), ps = oracle::spans_of(other);
    const double m = static_cast<double>(oracle::span_matches(gs, ps));
    const double p = m / ps.size(), r = m / gs.size();
    const double f = p + r == 0 ? 0 : 2 * p * r / (p + r);
    const auto seg = eval::segmentation_prf(gold, other);
    if (seg.gold_spans != gs.size() || seg.pred_spans != ps.size() || seg.matched != m)
      return {false, where + ": segmentation counts differ"};
    if (!close(seg.precision(), p, kRatioTolerance) || !close(seg.recall(), r, kRatioTolerance) ||
        !close(seg.f1(), f, kRatioTolerance))
      return {false, where + ": segmentation ratios differ"};
  }

  const std::vector<align::CharSpan> g = {{0, 1}, {1, 2}, {2, 4}, {4, 6}};
  const std::vector<align::CharSpan> p = {{0, 1}, {1, 2}, {2, 6}};
  const auto worked = eval::segmentation_prf(g, p);
  if (!close(worked.precision(), 2.0 / 3, kWorkedExampleTolerance) ||
      !close(worked.recall(), 1.0 / 2, kWorkedExampleTolerance) ||
      !close(worked.f1(), 4.0 / 7, kWorkedExampleTolerance))
    return {false, "worked example gives P=" + fixed(worked.precision(), 12) + " R=" + fixed(worked.recall(), 12) +
                       " F1=" + fixed(worked.f1(), 12)};

  const auto dev = c.dev().string();
  const auto att = testing::run_cli({"eval", "--gold", dev, "--pred", dev, "--mode", "attachment"});
  if (att.code != 0 || att.out.find("UAS 100.00\nLAS 100.00\n") == std::string::npos)
    return {false, "self-evaluation printed: " + att.out};
  const auto doc = conllu::read_document(c.dev());
  const auto seg = eval::corpus_eval(doc, doc, eval::Mode::segmentation);
  if (std::get<eval::SegReport>(seg.total).f1() != 1.0) return {false, "self-evaluation F1 is not 1"};

  return {true, std::to_string(kMetricCases) + " random " + std::to_string(kMetricTokens) +
                    "-token cases equal brute force; worked example P=2/3 R=1/2 F1=4/7 within " +
                    fixed(kWorkedExampleTolerance * 1e9, 0) + "e-9; dev self-eval UAS 100.00 LAS 100.00 F1 1"};
}

std::string tiling_problem(const diff::ParseDiff& d, const conllu::Sentence& a, const conllu::Sentence& b) {
  std::size_t at = 0;
  diff::DiffSummary tally;
  for (const auto& e : d.edits) {
    if (e.span.start != at || e.span.end <= at) return "edits do not tile";
    at = e.span.end;
    switch (e.kind) {
      case diff::EditKind::identical:
        ++tally.identical;
        if (e.left_ids.size() != 1 || e.right_ids.size() != 1) return "identical edit with several ids";
        if (text::encode(align::normalize_form(a.tokens[e.left_ids[0] - 1].form)) !=
            text::encode(align::normalize_form(b.tokens[e.right_ids[0] - 1].form)))
          return "identical edit with different forms";
        break;
      case diff::EditKind::merge: ++tally.merge; break;
      case diff::EditKind::split: ++tally.split; break;
      case diff::EditKind::divergent: ++tally.divergent; break;
    }
  }
  if (at != d.text.size()) return "edits do not cover the text";
  for (const auto& c : d.edges) {
    if (c.agreement == diff::Agreement::both) ++tally.both;
    if (c.agreement == diff::Agreement::head_only) ++tally.head_only;
    if (c.agreement == diff::Agreement::neither) ++tally.neither;
  }
  const auto& s = d.summary;
  if (s.identical != tally.identical || s.merge != tally.merge || s.split != tally.split ||
      s.divergent != tally.divergent || s.both != tally.both || s.head_only != tally.head_only ||
      s.neither != tally.neither)
    return "summary does not match the lists";
  return {};
}

Outcome diff_laws(const conllu::Document& dev, const std::vector<conllu::Document>& converted) {
  for (std::size_t i = 0; i < dev.sentences.size(); ++i) {
    const auto d = diff::diff_parses(dev.sentences[i], dev.sentences[i]);
    const auto& s = d.summary;
    if (s.merge || s.split || s.divergent || s.head_only || s.neither)
      return {false, "diff(a,a) not empty for dev sentence " + std::to_string(i)};
  }

  oracle::Rng rng(kSeed + 4);
  for (int trial = 0; trial < kMirrorPairs; ++trial) {
    const int n = oracle::uniform(rng, 1, 10);
    const auto chars = oracle::random_chars(rng, n);
    const auto a = oracle::random_parse(rng, oracle::cut(chars, oracle::random_partition(rng, n)));
    const auto b = oracle::random_parse(rng, oracle::cut(chars, oracle::random_partition(rng, n)));
    if (diff::diff_parses(b, a) != diff::mirror(diff::diff_parses(a, b)))
      return {false, "mirror law fails on pair " + std::to_string(trial)};
  }

  std::size_t pairs = 0;
  for (const auto& doc : converted) {
    for (std::size_t i = 0; i < dev.sentences.size(); ++i) {
      const auto& a = dev.sentences[i];
      const auto& b = doc.sentences[i];
      for (const auto& [l, r] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
        const auto problem = tiling_problem(diff::diff_parses(*l, *r), *l, *r);
        if (!problem.empty()) return {false, "dev sentence " + std::to_string(i) + ": " + problem};
        ++pairs;
      }
    }
  }
  return {true, "diff(a,a) empty on " + std::to_string(dev.sentences.size()) + " dev sentences; mirror law on " +
                    std::to_string(kMirrorPairs) + " random pairs; tiling on " + std::to_string(pairs) +
                    " dev/converted pairs"};
}

Outcome service_contract(const conllu::Document& dev, const conllu::Document& converted) {
  const auto conf = testing::data_path("catalog/catalog.conf");
  const auto catalog =
      service::load_catalog(service::parse_config(testing::slurp(conf), conf.parent_path()));
  if (catalog.schemes().size() != 2) return {false, "fixture catalog does not hold 2 schemes"};

  service::Server server(catalog);  // no static directory: no viewer
  const int port = server.bind("127.0.0.1", 0);
  std::thread loop([&] { server.listen(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  std::size_t requests = 0;
  std::string problem;
  auto fetch = [&](const std::string& target, const std::function<std::string(const json&)>& check) {
    if (!problem.empty()) return json();
    auto res = client.Get(target);
    ++requests;
    if (!res || res->status != 200) {
      problem = target + ": HTTP " + (res ? std::to_string(res->status) : std::string("failure"));
      return json();
    }
    auto again = client.Get(target);
    if (!again || again->body != res->body) problem = target + ": response not stable";
    const auto body = json::parse(res->body);
    const auto p = check(body);
    if (!p.empty() && problem.empty()) problem = target + ": " + p;
    return body;
  };

  const auto schemes = fetch("/api/schemes", schema::schemes);
  if (problem.empty() && schemes["schemes"].size() != 2) problem = "/api/schemes: expected 2 entries";
  fetch("/api/sentences?scheme=gsd&offset=0&limit=2", schema::sentences);
  fetch("/api/eval?left=gsd&right=ltp", schema::eval);
  fetch("/api/eval?left=ltp&right=ltp", schema::eval);
  for (const auto& id : {"gsd", "ltp"})
    for (std::size_t i = 0; i < catalog.sentence_count(); ++i)
      fetch(std::string("/api/parse?scheme=") + id + "&sent=" + std::to_string(i), schema::parse);
  for (std::size_t i = 0; i < catalog.sentence_count(); ++i)
    fetch("/api/diff?left=gsd&right=ltp&sent=" + std::to_string(i), schema::diff);
  const auto first = fetch("/api/diff?left=gsd&right=ltp&sent=0", schema::diff);
  if (problem.empty() && (first["edits"].size() != 1 || first["edits"][0]["kind"] != "merge"))
    problem = "/api/diff sent 0: expected one merge edit";
  if (problem.empty()) {
    auto res = client.Get("/api/parse?scheme=nope&sent=0");
    if (!res || res->status != 404) problem = "unknown scheme is not 404";
    res = client.Get("/api/parse?scheme=gsd");
    if (!res || res->status != 400) problem = "malformed query is not 400";
  }
  server.stop();
  loop.join();
  if (!problem.empty()) return {false, problem};

  // the same invariants over the evaluation corpus and one converted variant
  std::vector<service::Scheme> schemes_big = {{"gold", dev, "dev"}, {"coarse", converted, "converted dev"}};
  const service::SchemeCatalog big(std::move(schemes_big));
  const service::Api api(big);
  std::size_t parsed = 0;
  for (const auto& id : {"gold", "coarse"}) {
    for (std::size_t i = 0; i < big.sentence_count(); ++i) {
      const auto r = api.handle("/api/parse", {{"scheme", id}, {"sent", std::to_string(i)}});
      const auto p = r.status == 200 ? schema::parse(json::parse(r.body)) : "HTTP " + std::to_string(r.status);
      if (!p.empty()) return {false, std::string(id) + " sentence " + std::to_string(i) + ": " + p};
      ++parsed;
    }
  }
  for (std::size_t i = 0; i < big.sentence_count(); ++i) {
    const auto r = api.handle("/api/diff", {{"left", "gold"}, {"right", "coarse"}, {"sent", std::to_string(i)}});
    const auto p = r.status == 200 ? schema::diff(json::parse(r.body)) : "HTTP " + std::to_string(r.status);
    if (!p.empty()) return {false, "dev diff " + std::to_string(i) + ": " + p};
  }
  const auto e = api.handle("/api/eval", {{"left", "gold"}, {"right", "coarse"}});
  if (e.status != 200 || !schema::eval(json::parse(e.body)).empty()) return {false, "dev /api/eval not schema-valid"};

  return {true, "5 endpoints schema-valid over HTTP on the 2-scheme catalog (" + std::to_string(requests) +
                    " requests, no static bundle); parse invariants on " + std::to_string(parsed) +
                    " dev/converted sentences"};
}

}  // namespace

int main() {
  const Corpus corpus = locate_corpus();
  std::cout << "corpus: " << corpus.label;
  if (corpus.label == "bundled sample") std::cout << " (set UD_ZH_GSD_DIR to run on the released splits)";
  std::cout << "\n";

  int failures = 0;
  auto report = [&](const std::string& name, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  };
  auto needs_corpus = [&](const std::function<Outcome()>& body) {
    return [&corpus, body]() -> Outcome {
      if (!corpus.problem.empty()) return {false, corpus.problem};
      return body();
    };
  };

  std::optional<conllu::Document> dev;
  ConversionRun conversion;

  report("round-trip", needs_corpus([&] { return round_trip(corpus); }));
  report("validation", needs_corpus([&] { return validation(corpus); }));
  report("alignment oracle", alignment_oracle);
  report("legality oracle", legality_oracle);
  report("conversion invariants", needs_corpus([&] {
           dev = conllu::read_document(corpus.dev());
           conversion = conversion_invariants(*dev);
           return Outcome{conversion.pass, conversion.detail};
         }));
  report("conversion fixtures", conversion_fixtures);
  report("metric oracles", needs_corpus([&] { return metric_oracles(corpus); }));
  report("diff laws", needs_corpus([&] {
           if (!dev || conversion.outputs.empty()) return Outcome{false, "no converted dev variants"};
           return diff_laws(*dev, conversion.outputs);
         }));
  report("service contract", [&] {
    if (!dev || conversion.outputs.empty()) return Outcome{false, "no converted dev variants"};
    return service_contract(*dev, conversion.outputs.front());
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
