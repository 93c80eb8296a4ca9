#ifndef WBTREE_CONLLU_HPP
#define WBTREE_CONLLU_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wbtree::conllu {

/// FEATS / MISC column: `|`-separated items, usually `Key=Value`.
/// Item order and spelling are kept exactly as read.
class AttrList {
 public:
  AttrList() = default;
  static AttrList parse(std::string_view field);

  std::string str() const;
  bool empty() const { return items_.empty(); }
  const std::vector<std::string>& items() const { return items_; }

  std::optional<std::string_view> get(std::string_view key) const;
  /// Replaces the value in place if the key exists, else appends.
  void set(std::string_view key, std::string_view value);
  bool erase(std::string_view key);

  friend bool operator==(const AttrList&, const AttrList&) = default;

 private:
  std::vector<std::string> items_;
};

/// One CoNLL-U word line. `std::nullopt` is the unset marker `_`; FORM has no
/// unset state (a `_` form is a literal underscore).
struct Token {
  int id = 0;
  std::string form;
  std::optional<std::string> lemma;
  std::optional<std::string> upos;
  std::optional<std::string> xpos;
  std::optional<AttrList> feats;
  std::optional<int> head;
  std::optional<std::string> deprel;
  std::optional<std::string> deps;
  std::optional<AttrList> misc;

  /// False iff MISC carries SpaceAfter=No.
  bool space_after() const;

  friend bool operator==(const Token&, const Token&) = default;
};

enum class RowKind { multiword_range, empty_node };

/// Multiword-token range (`3-4`) or empty node (`3.1`) kept as raw columns.
struct OpaqueRow {
  RowKind kind = RowKind::multiword_range;
  /// Number of regular tokens preceding this row in the sentence.
  std::size_t before = 0;
  std::vector<std::string> fields;

  friend bool operator==(const OpaqueRow&, const OpaqueRow&) = default;
};

struct Sentence {
  std::vector<std::string> comments;  // full lines, including the leading '#'
  std::vector<Token> tokens;
  std::vector<OpaqueRow> opaque_rows;

  /// Value of a `# sent_id = ...` comment.
  std::optional<std::string> sent_id() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::vector<Sentence> sentences;
  std::string source_name;
};

class FormatError : public std::runtime_error {
 public:
  enum class Kind { parse, structure, encoding };

  FormatError(Kind kind, std::size_t line, const std::string& message);

  Kind kind() const { return kind_; }
  /// 1-based line number, 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// Reads a whole CoNLL-U document. LF line endings only; CR is rejected.
Document parse_document(std::string_view text, std::string source_name = {});

/// Reads a file; I/O failures surface as std::runtime_error.
Document read_document(const std::filesystem::path& path);

std::string serialize_sentence(const Sentence& s);
std::string serialize_document(const Document& doc);

struct Violation {
  int token_id = 0;  // 0 for sentence-level findings
  std::string rule;  // "unset head", "head out of range", "self loop", "no root",
                     // "multiple roots", "cycle", "not connected", "id sequence"
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks ids 1..n, heads set and in range, single root, acyclic, connected.
std::vector<Violation> validate_sentence(const Sentence& s);

std::string read_file(const std::filesystem::path& path);

}  // namespace wbtree::conllu

#endif  // WBTREE_CONLLU_HPP
