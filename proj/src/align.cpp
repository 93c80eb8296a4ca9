#include "wbtree/align.hpp"

#include <stdexcept>

#include "wbtree/text.hpp"

namespace wbtree::align {

std::vector<CharSpan> char_index(const conllu::Sentence& s) {
  std::vector<CharSpan> spans;
  spans.reserve(s.tokens.size());
  std::size_t pos = 0;
  for (const auto& t : s.tokens) {
    const std::size_t len = text::length(t.form);
    spans.push_back({pos, pos + len});
    pos += len + (t.space_after() ? 1 : 0);
  }
  return spans;
}

std::string raw_text(const conllu::Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    out += s.tokens[i].form;
    if (i + 1 < s.tokens.size() && s.tokens[i].space_after()) out.push_back(' ');
  }
  return out;
}

std::u32string normalize_form(std::string_view form, NormalizeOptions opts) {
  auto chars = text::strip_whitespace(text::decode(form));
  return opts.nfc ? text::nfc(chars) : chars;
}

NormalizedText normalized_index(std::span<const std::string> forms, NormalizeOptions opts) {
  NormalizedText out;
  out.spans.reserve(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const auto chars = normalize_form(forms[i], opts);
    if (chars.empty())
      throw std::invalid_argument("token " + std::to_string(i + 1) +
                                  " has no characters besides whitespace");
    out.spans.push_back({out.chars.size(), out.chars.size() + chars.size()});
    out.chars += chars;
  }
  return out;
}

NormalizedText normalized_index(const conllu::Sentence& s, NormalizeOptions opts) {
  return normalized_index(forms_of(s), opts);
}

std::vector<std::string> forms_of(const conllu::Sentence& s) {
  std::vector<std::string> forms;
  forms.reserve(s.tokens.size());
  for (const auto& t : s.tokens) forms.push_back(t.form);
  return forms;
}

std::string_view to_string(AlignStatus status) {
  switch (status) {
    case AlignStatus::aligned: return "aligned";
    case AlignStatus::boundary_splits_fine_token: return "boundary-splits-fine-token";
    case AlignStatus::character_sequence_differs: return "character-sequence-differs";
    case AlignStatus::leftover_coarse_tokens: return "leftover-coarse-tokens";
    case AlignStatus::leftover_fine_tokens: return "leftover-fine-tokens";
  }
  return "unknown";
}

std::string AlignmentResult::describe() const {
  if (aligned()) return "aligned";
  return std::string(to_string(status)) + " at char " + std::to_string(position);
}

AlignmentResult align_tokenizations(const conllu::Sentence& fine,
                                    std::span<const std::string> coarse_forms,
                                    NormalizeOptions opts) {
  const NormalizedText fine_text = normalized_index(fine, opts);
  const std::u32string& chars = fine_text.chars;

  AlignmentResult result;
  auto mismatch = [&](AlignStatus status, std::size_t position) {
    result.groups.clear();
    result.status = status;
    result.position = position;
    return result;
  };

  std::size_t pos = 0;
  std::size_t next_fine = 0;  // index of the first fine token not yet grouped
  for (const auto& form : coarse_forms) {
    if (pos == chars.size()) return mismatch(AlignStatus::leftover_coarse_tokens, pos);
    const auto coarse = normalize_form(form, opts);
    if (coarse.empty()) return mismatch(AlignStatus::character_sequence_differs, pos);
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      if (pos + k >= chars.size() || coarse[k] != chars[pos + k])
        return mismatch(AlignStatus::character_sequence_differs, pos + k);
    }
    const std::size_t end = pos + coarse.size();
    const std::size_t first = next_fine;
    while (next_fine < fine_text.spans.size() && fine_text.spans[next_fine].end < end) ++next_fine;
    if (fine_text.spans[next_fine].end != end)
      return mismatch(AlignStatus::boundary_splits_fine_token, end);
    ++next_fine;
    result.groups.push_back({static_cast<int>(first) + 1, static_cast<int>(next_fine), form});
    pos = end;
  }
  if (pos != chars.size()) return mismatch(AlignStatus::leftover_fine_tokens, pos);
  return result;
}

std::vector<std::vector<std::string>> parse_segmented(std::string_view input) {
  if (const auto bad = text::find_invalid_utf8(input))
    throw conllu::FormatError(conllu::FormatError::Kind::encoding, 0,
                              "invalid UTF-8 at byte " + std::to_string(*bad));
  std::vector<std::vector<std::string>> out;
  std::size_t line_no = 0;
  std::string_view rest = input;
  while (!rest.empty()) {
    ++line_no;
    const auto nl = rest.find('\n');
    const std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (line.find('\r') != std::string_view::npos)
      throw conllu::FormatError(conllu::FormatError::Kind::parse, line_no,
                                "carriage return in segmented line");
    std::vector<std::string> tokens;
    std::size_t start = 0;
    for (;;) {
      const auto sp = line.find(' ', start);
      const auto tok = line.substr(start, sp == std::string_view::npos ? sp : sp - start);
      if (tok.empty())
        throw conllu::FormatError(conllu::FormatError::Kind::parse, line_no,
                                  "empty token (tokens must be separated by single spaces)");
      tokens.emplace_back(tok);
      if (sp == std::string_view::npos) break;
      start = sp + 1;
    }
    out.push_back(std::move(tokens));
  }
  return out;
}

std::string segmented_line(std::span<const std::string> forms) {
  std::string out;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (i) out.push_back(' ');
    out += forms[i];
  }
  return out;
}

}  // namespace wbtree::align
