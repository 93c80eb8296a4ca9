#ifndef WBTREE_EVAL_HPP
#define WBTREE_EVAL_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wbtree/align.hpp"
#include "wbtree/conllu.hpp"

namespace wbtree::eval {

struct AttachmentReport {
  std::size_t token_total = 0;
  std::size_t head_correct = 0;
  std::size_t head_and_label_correct = 0;

  double uas() const;
  double las() const;
  AttachmentReport& operator+=(const AttachmentReport& other);
};

struct SegReport {
  std::size_t gold_spans = 0;
  std::size_t pred_spans = 0;
  std::size_t matched = 0;

  double precision() const;
  double recall() const;
  /// 2PR/(P+R), 0 when P+R = 0.
  double f1() const;
  SegReport& operator+=(const SegReport& other);
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-token head and head+deprel agreement. Both sentences must carry the
/// same forms in the same order; punctuation is scored.
AttachmentReport attachment_scores(const conllu::Sentence& gold, const conllu::Sentence& pred);

/// Exact-span matching. Both span lists must cover the same characters.
SegReport segmentation_prf(std::span<const align::CharSpan> gold,
                           std::span<const align::CharSpan> pred);

/// Spans taken over the whitespace-normalized text of each sentence.
SegReport segmentation_prf(const conllu::Sentence& gold, const conllu::Sentence& pred);

enum class Mode { attachment, segmentation };

struct SentenceResult {
  std::size_t index = 0;
  std::string sent_id;
  std::variant<AttachmentReport, SegReport> report;
};

struct CorpusReport {
  Mode mode = Mode::attachment;
  std::vector<SentenceResult> sentences;
  /// Micro-averaged: counts summed before taking ratios.
  std::variant<AttachmentReport, SegReport> total;
};

CorpusReport corpus_eval(const conllu::Document& gold, const conllu::Document& pred, Mode mode);

/// `UAS 80.05` style lines, percentages with two decimals.
std::string format_report(const CorpusReport& report);

std::string percent(double ratio);

}  // namespace wbtree::eval

#endif  // WBTREE_EVAL_HPP
