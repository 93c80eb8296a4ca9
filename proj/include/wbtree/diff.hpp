#ifndef WBTREE_DIFF_HPP
#define WBTREE_DIFF_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wbtree/align.hpp"
#include "wbtree/conllu.hpp"

namespace wbtree::diff {

enum class EditKind { identical, merge, split, divergent };
enum class Agreement { both, head_only, neither };

std::string_view to_string(EditKind kind);
std::string_view to_string(Agreement agreement);

/// One region between consecutive shared boundaries. `merge` means several
/// left tokens against one right token; `split` is the mirror case.
struct TokenAlignmentEdit {
  EditKind kind = EditKind::identical;
  std::vector<int> left_ids;
  std::vector<int> right_ids;
  align::CharSpan span;

  friend bool operator==(const TokenAlignmentEdit&, const TokenAlignmentEdit&) = default;
};

/// Head of a dependent, addressed by character span so that both sides are
/// comparable. nullopt span with `root` set means the dependent is the root.
struct HeadRef {
  bool root = false;
  std::optional<align::CharSpan> span;  // unset when the head is missing

  friend bool operator==(const HeadRef&, const HeadRef&) = default;
};

struct EdgeComparison {
  align::CharSpan dependent_span;
  int left_id = 0;
  int right_id = 0;
  HeadRef left_head;
  HeadRef right_head;
  std::optional<std::string> left_label;
  std::optional<std::string> right_label;
  Agreement agreement = Agreement::both;

  friend bool operator==(const EdgeComparison&, const EdgeComparison&) = default;
};

struct DiffSummary {
  std::size_t identical = 0;
  std::size_t merge = 0;
  std::size_t split = 0;
  std::size_t divergent = 0;
  std::size_t both = 0;
  std::size_t head_only = 0;
  std::size_t neither = 0;
  /// Dependents with no identically spanned counterpart on the other side.
  std::size_t incomparable_left = 0;
  std::size_t incomparable_right = 0;

  friend bool operator==(const DiffSummary&, const DiffSummary&) = default;
};

struct ParseDiff {
  std::u32string text;  // shared whitespace-normalized text
  std::vector<TokenAlignmentEdit> edits;
  std::vector<EdgeComparison> edges;
  DiffSummary summary;

  friend bool operator==(const ParseDiff&, const ParseDiff&) = default;
};

class DiffError : public std::runtime_error {
 public:
  DiffError(const std::string& message, std::size_t offset)
      : std::runtime_error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Compares two parses of the same text. Throws DiffError when their
/// whitespace-normalized character sequences differ.
ParseDiff diff_parses(const conllu::Sentence& left, const conllu::Sentence& right);

/// diff(b, a) derived from diff(a, b).
ParseDiff mirror(const ParseDiff& d);

/// Multi-line human-readable rendering.
std::string render_text(const ParseDiff& d, const conllu::Sentence& left,
                        const conllu::Sentence& right);

}  // namespace wbtree::diff

#endif  // WBTREE_DIFF_HPP
