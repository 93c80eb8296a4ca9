#ifndef WBTREE_TEXT_HPP
#define WBTREE_TEXT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace wbtree::text {

// All offsets in this library are counted in Unicode scalar values.

/// Byte offset of the first invalid UTF-8 sequence, or nullopt if `bytes`
/// is well-formed (no overlongs, surrogates, or values above U+10FFFF).
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes);

/// Decodes well-formed UTF-8. Throws std::invalid_argument otherwise.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view chars);

/// Number of scalar values in well-formed UTF-8.
std::size_t length(std::string_view bytes);

bool is_whitespace(char32_t c);

/// Unicode letter (general category L*).
bool is_letter(char32_t c);

/// Letter or ideograph belonging to Han, Hiragana, Katakana, Hangul or Bopomofo.
bool is_cjk(char32_t c);

/// True if the string holds at least one letter outside the CJK scripts,
/// i.e. the token is treated as (part of) a foreign word.
bool has_foreign_letter(std::string_view bytes);

/// Removes every whitespace scalar value.
std::u32string strip_whitespace(std::u32string_view chars);

/// Unicode NFC normalization. Throws std::invalid_argument on bad input.
std::u32string nfc(std::u32string_view chars);

}  // namespace wbtree::text

#endif  // WBTREE_TEXT_HPP
