#ifndef WBTREE_MERGE_HPP
#define WBTREE_MERGE_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbtree/align.hpp"
#include "wbtree/conllu.hpp"

namespace wbtree::merge {

enum class OnIllegal { reject_group, reject_sentence };
enum class UposFallback { head_token, first_token };

struct MergePolicy {
  OnIllegal on_illegal = OnIllegal::reject_group;
  /// Fused forms allowed to merge even with several external heads.
  std::set<std::string> lexicon_override;
  UposFallback upos_fallback = UposFallback::head_token;
  std::string xpos_delimiter = "+";

  /// Throws std::invalid_argument if the delimiter is empty or holds a tab.
  void validate() const;
};

struct Legality {
  bool legal = false;
  /// Members whose head lies outside the group (head 0 counts as outside).
  std::vector<int> external_head_members;
  std::string reason;  // empty when legal
};

/// A group may be fused only if exactly one member attaches outside it,
/// unless its fused form is listed in the policy's lexicon override.
Legality check_legality(const conllu::Sentence& s, const align::MergeGroup& g,
                        const MergePolicy& policy);

/// Surface form of the fused group. A space survives at an internal boundary
/// only if the left member lacks SpaceAfter=No and one side is a foreign word.
std::string fused_form(const conllu::Sentence& s, const align::MergeGroup& g);

/// Builds the merged token. Ids and heads still refer to the input sentence;
/// `apply_merges` renumbers them.
conllu::Token fuse_group(const conllu::Sentence& s, const align::MergeGroup& g,
                         const std::optional<std::string>& upos, const MergePolicy& policy);

struct Rejection {
  int first = 0;
  int last = 0;
  std::string reason;
};

struct ConversionLog {
  std::size_t sentence_index = 0;
  std::string sent_id;  // falls back to the sentence index
  int merged = 0;
  std::vector<Rejection> rejected;
  std::vector<std::string> notes;
  int tokens_before = 0;
  int tokens_after = 0;

  /// `sent_id TAB merged TAB rejected TAB reason-list`
  std::string line() const;
};

class ConversionError : public std::runtime_error {
 public:
  ConversionError(const std::string& message, ConversionLog log)
      : std::runtime_error(message), log_(std::move(log)) {}
  const ConversionLog& log() const { return log_; }

 private:
  ConversionLog log_;
};

struct ConvertedSentence {
  conllu::Sentence sentence;
  ConversionLog log;
};

/// Replaces each legal multi-token group by its fused token and renumbers.
/// `groups` must cover the sentence in order; `upos` is empty or parallel to
/// `groups`. Throws ConversionError under reject-sentence when a group is
/// illegal, std::invalid_argument when `groups` is not a cover.
ConvertedSentence apply_merges(const conllu::Sentence& s, std::span<const align::MergeGroup> groups,
                               std::span<const std::optional<std::string>> upos,
                               const MergePolicy& policy, std::size_t sentence_index = 0);

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusConversion {
  conllu::Document document;
  std::vector<ConversionLog> logs;
};

/// Runs align, legality, fusion and renumbering over paired inputs. Sentences
/// that fail to align, or are rejected whole, pass through unchanged.
CorpusConversion convert_corpus(const conllu::Document& gold,
                                const std::vector<std::vector<std::string>>& segmented,
                                const conllu::Document& predicted, const MergePolicy& policy,
                                align::NormalizeOptions opts = {});

std::string format_logs(std::span<const ConversionLog> logs);

}  // namespace wbtree::merge

#endif  // WBTREE_MERGE_HPP
