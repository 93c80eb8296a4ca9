#ifndef WBTREE_ALIGN_HPP
#define WBTREE_ALIGN_HPP

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wbtree/conllu.hpp"

namespace wbtree::align {

/// Half-open range of scalar-value offsets.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend auto operator<=>(const CharSpan&, const CharSpan&) = default;
};

/// Offsets into the raw sentence text: forms separated by one space unless
/// the left token carries SpaceAfter=No.
std::vector<CharSpan> char_index(const conllu::Sentence& s);

/// The raw text `char_index` addresses (no trailing space).
std::string raw_text(const conllu::Sentence& s);

struct NormalizeOptions {
  bool nfc = false;
};

/// Form with all whitespace removed, optionally NFC-normalized.
std::u32string normalize_form(std::string_view form, NormalizeOptions opts = {});

/// Whitespace-free character sequence of a tokenization, and each token's
/// span in it. Every cross-scheme comparison runs in these coordinates.
struct NormalizedText {
  std::u32string chars;
  std::vector<CharSpan> spans;
};

/// Throws std::invalid_argument if some form is empty after normalization.
NormalizedText normalized_index(std::span<const std::string> forms, NormalizeOptions opts = {});
NormalizedText normalized_index(const conllu::Sentence& s, NormalizeOptions opts = {});

std::vector<std::string> forms_of(const conllu::Sentence& s);

/// Fine tokens `first..last` (ids, inclusive) that make up one coarse token.
struct MergeGroup {
  int first = 0;
  int last = 0;
  std::string coarse_form;

  int size() const { return last - first + 1; }
  friend bool operator==(const MergeGroup&, const MergeGroup&) = default;
};

enum class AlignStatus {
  aligned,
  boundary_splits_fine_token,
  character_sequence_differs,
  leftover_coarse_tokens,
  leftover_fine_tokens,
};

std::string_view to_string(AlignStatus status);

struct AlignmentResult {
  /// Covers every fine token exactly once when aligned; empty otherwise.
  std::vector<MergeGroup> groups;
  AlignStatus status = AlignStatus::aligned;
  /// Normalized character offset of the mismatch.
  std::size_t position = 0;

  bool aligned() const { return status == AlignStatus::aligned; }
  std::string describe() const;
};

/// Aligns a coarser tokenization onto the fine one. Succeeds only when every
/// coarse boundary is also a fine boundary, i.e. no fine token is split.
AlignmentResult align_tokenizations(const conllu::Sentence& fine,
                                    std::span<const std::string> coarse_forms,
                                    NormalizeOptions opts = {});

/// Reads a sentence-per-line file with tokens separated by single spaces.
/// Throws conllu::FormatError on CR, empty tokens or invalid UTF-8.
std::vector<std::vector<std::string>> parse_segmented(std::string_view text);

/// One line of a segmented file (without newline) holding the sentence's forms.
std::string segmented_line(std::span<const std::string> forms);

}  // namespace wbtree::align

#endif  // WBTREE_ALIGN_HPP
