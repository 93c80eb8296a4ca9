#include "wbtree/conllu.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wbtree/text.hpp"

namespace wbtree::conllu {

namespace {

constexpr std::string_view kUnset = "_";
constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Strict non-negative decimal: no sign, no leading zeros (except "0").
std::optional<int> parse_index(std::string_view s) {
  if (s.empty() || (s.size() > 1 && s[0] == '0')) return std::nullopt;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<std::string> optional_field(std::string_view f) {
  if (f == kUnset) return std::nullopt;
  return std::string(f);
}

std::optional<AttrList> optional_attrs(std::string_view f) {
  if (f == kUnset) return std::nullopt;
  return AttrList::parse(f);
}

std::string_view or_unset(const std::optional<std::string>& v) {
  return v ? std::string_view(*v) : kUnset;
}

std::string attrs_or_unset(const std::optional<AttrList>& v) {
  return v ? v->str() : std::string(kUnset);
}

struct Reader {
  std::string_view source;
  Document doc;
  Sentence current;
  bool open = false;
  std::size_t line_no = 0;

  [[noreturn]] void fail(FormatError::Kind kind, const std::string& msg) const {
    throw FormatError(kind, line_no, msg);
  }

  void finish_sentence() {
    if (current.tokens.empty())
      fail(FormatError::Kind::structure, "sentence has no token lines");
    doc.sentences.push_back(std::move(current));
    current = Sentence{};
    open = false;
  }

  void token_line(std::string_view line) {
    const auto cols = split(line, '\t');
    if (cols.size() != kColumns)
      fail(FormatError::Kind::parse, "expected 10 tab-separated fields, found " +
                                         std::to_string(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i].empty())
        fail(FormatError::Kind::parse, "empty field in column " + std::to_string(i + 1));

    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      opaque_line(cols);
      return;
    }
    const auto parsed_id = parse_index(id);
    if (!parsed_id || *parsed_id == 0)
      fail(FormatError::Kind::parse, "malformed token id '" + std::string(id) + "'");
    const int expected = static_cast<int>(current.tokens.size()) + 1;
    if (*parsed_id != expected) {
      const bool duplicate = *parsed_id < expected;
      fail(FormatError::Kind::structure,
           std::string(duplicate ? "duplicate" : "non-contiguous") + " token id " +
               std::string(id) + ", expected " + std::to_string(expected));
    }

    Token tok;
    tok.id = *parsed_id;
    tok.form = std::string(cols[1]);
    tok.lemma = optional_field(cols[2]);
    tok.upos = optional_field(cols[3]);
    tok.xpos = optional_field(cols[4]);
    tok.feats = optional_attrs(cols[5]);
    if (cols[6] != kUnset) {
      const auto head = parse_index(cols[6]);
      if (!head) fail(FormatError::Kind::parse, "malformed head '" + std::string(cols[6]) + "'");
      tok.head = *head;
    }
    tok.deprel = optional_field(cols[7]);
    tok.deps = optional_field(cols[8]);
    tok.misc = optional_attrs(cols[9]);
    current.tokens.push_back(std::move(tok));
    open = true;
  }

  void opaque_line(const std::vector<std::string_view>& cols) {
    const std::string_view id = cols[0];
    OpaqueRow row;
    const auto dash = id.find('-');
    const auto dot = id.find('.');
    bool ok;
    if (dash != std::string_view::npos) {
      row.kind = RowKind::multiword_range;
      const auto lo = parse_index(id.substr(0, dash));
      const auto hi = parse_index(id.substr(dash + 1));
      ok = lo && hi && *lo >= 1 && *lo < *hi;
    } else {
      row.kind = RowKind::empty_node;
      const auto major = parse_index(id.substr(0, dot));
      const auto minor = parse_index(id.substr(dot + 1));
      ok = major && minor && *minor >= 1;
    }
    if (!ok) fail(FormatError::Kind::parse, "malformed token id '" + std::string(id) + "'");
    row.before = current.tokens.size();
    row.fields.assign(cols.begin(), cols.end());
    current.opaque_rows.push_back(std::move(row));
    open = true;
  }

  void run() {
    if (const auto bad = text::find_invalid_utf8(source)) {
      line_no = static_cast<std::size_t>(std::count(source.begin(), source.begin() + *bad, '\n')) + 1;
      fail(FormatError::Kind::encoding, "invalid UTF-8 at byte " + std::to_string(*bad));
    }
    std::string_view rest = source;
    while (!rest.empty()) {
      ++line_no;
      const auto nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);

      if (line.find('\r') != std::string_view::npos)
        fail(FormatError::Kind::parse, "carriage return in line (only LF line endings are accepted)");
      if (line.empty()) {
        if (!open) fail(FormatError::Kind::structure, "blank line outside a sentence");
        finish_sentence();
      } else if (line.front() == '#') {
        if (!current.tokens.empty() || !current.opaque_rows.empty())
          fail(FormatError::Kind::parse, "comment line after token lines");
        current.comments.emplace_back(line);
        open = true;
      } else {
        token_line(line);
      }
    }
    if (open) finish_sentence();
  }
};

}  // namespace

AttrList AttrList::parse(std::string_view field) {
  AttrList out;
  for (auto item : split(field, '|')) out.items_.emplace_back(item);
  return out;
}

std::string AttrList::str() const {
  std::string out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out.push_back('|');
    out += items_[i];
  }
  return out;
}

std::optional<std::string_view> AttrList::get(std::string_view key) const {
  for (const auto& item : items_) {
    std::string_view v(item);
    if (v.size() > key.size() && v.substr(0, key.size()) == key && v[key.size()] == '=')
      return v.substr(key.size() + 1);
  }
  return std::nullopt;
}

void AttrList::set(std::string_view key, std::string_view value) {
  std::string item = std::string(key) + "=" + std::string(value);
  for (auto& existing : items_) {
    std::string_view v(existing);
    if (v.size() > key.size() && v.substr(0, key.size()) == key && v[key.size()] == '=') {
      existing = std::move(item);
      return;
    }
  }
  items_.push_back(std::move(item));
}

bool AttrList::erase(std::string_view key) {
  const auto before = items_.size();
  std::erase_if(items_, [&](const std::string& item) {
    std::string_view v(item);
    return v.size() > key.size() && v.substr(0, key.size()) == key && v[key.size()] == '=';
  });
  return items_.size() != before;
}

bool Token::space_after() const {
  if (!misc) return true;
  const auto v = misc->get("SpaceAfter");
  return !(v && *v == "No");
}

std::optional<std::string> Sentence::sent_id() const {
  constexpr std::string_view prefix = "# sent_id = ";
  for (const auto& c : comments)
    if (c.starts_with(prefix)) return c.substr(prefix.size());
  return std::nullopt;
}

FormatError::FormatError(Kind kind, std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      kind_(kind),
      line_(line) {}

Document parse_document(std::string_view text, std::string source_name) {
  Reader reader{text, {}, {}, false, 0};
  reader.doc.source_name = std::move(source_name);
  reader.run();
  return std::move(reader.doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path.string());
  return std::move(ss).str();
}

Document read_document(const std::filesystem::path& path) {
  return parse_document(read_file(path), path.string());
}

std::string serialize_sentence(const Sentence& s) {
  std::string out;
  for (const auto& c : s.comments) {
    out += c;
    out.push_back('\n');
  }
  std::size_t next_opaque = 0;
  auto flush_opaque = [&](std::size_t before) {
    while (next_opaque < s.opaque_rows.size() && s.opaque_rows[next_opaque].before <= before) {
      const auto& row = s.opaque_rows[next_opaque++];
      for (std::size_t i = 0; i < row.fields.size(); ++i) {
        if (i) out.push_back('\t');
        out += row.fields[i];
      }
      out.push_back('\n');
    }
  };
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    flush_opaque(i);
    const Token& t = s.tokens[i];
    out += std::to_string(t.id);
    out.push_back('\t');
    out += t.form;
    out.push_back('\t');
    out += or_unset(t.lemma);
    out.push_back('\t');
    out += or_unset(t.upos);
    out.push_back('\t');
    out += or_unset(t.xpos);
    out.push_back('\t');
    out += attrs_or_unset(t.feats);
    out.push_back('\t');
    out += t.head ? std::to_string(*t.head) : std::string(kUnset);
    out.push_back('\t');
    out += or_unset(t.deprel);
    out.push_back('\t');
    out += or_unset(t.deps);
    out.push_back('\t');
    out += attrs_or_unset(t.misc);
    out.push_back('\n');
  }
  flush_opaque(s.tokens.size());
  out.push_back('\n');
  return out;
}

std::string serialize_document(const Document& doc) {
  std::string out;
  for (const auto& s : doc.sentences) out += serialize_sentence(s);
  return out;
}

std::vector<Violation> validate_sentence(const Sentence& s) {
  std::vector<Violation> out;
  const int n = static_cast<int>(s.tokens.size());

  for (int i = 0; i < n; ++i) {
    if (s.tokens[i].id != i + 1)
      out.push_back({s.tokens[i].id, "id sequence",
                     "token at position " + std::to_string(i + 1) + " has id " +
                         std::to_string(s.tokens[i].id)});
  }
  if (!out.empty()) return out;

  // parent[i] in 1..n, 0 for root, -1 when the edge is unusable
  std::vector<int> parent(n + 1, -1);
  int roots = 0;
  for (const Token& t : s.tokens) {
    if (!t.head) {
      out.push_back({t.id, "unset head", "token " + std::to_string(t.id) + " has no head"});
    } else if (*t.head > n) {
      out.push_back({t.id, "head out of range",
                     "token " + std::to_string(t.id) + " points to " + std::to_string(*t.head) +
                         " in a " + std::to_string(n) + "-token sentence"});
    } else if (*t.head == t.id) {
      out.push_back({t.id, "self loop", "token " + std::to_string(t.id) + " is its own head"});
    } else {
      parent[t.id] = *t.head;
      if (*t.head == 0 && ++roots > 1)
        out.push_back({t.id, "multiple roots",
                       "token " + std::to_string(t.id) + " is an additional root"});
    }
  }
  if (roots == 0) out.push_back({0, "no root", "no token has head 0"});

  // 0 = unvisited, 1 = on current path, 2 = reaches root, 3 = does not
  std::vector<int> state(n + 1, 0);
  std::vector<bool> on_cycle(n + 1, false);
  for (int start = 1; start <= n; ++start) {
    if (state[start]) continue;
    std::vector<int> path;
    int v = start;
    int outcome;
    for (;;) {
      if (v == 0) {
        outcome = 2;
        break;
      }
      if (v < 0) {
        outcome = 3;
        break;
      }
      if (state[v] == 2 || state[v] == 3) {
        outcome = state[v];
        break;
      }
      if (state[v] == 1) {
        const auto from = std::find(path.begin(), path.end(), v);
        const int smallest = *std::min_element(from, path.end());
        std::string trace = std::to_string(smallest);
        int w = smallest;
        do {
          on_cycle[w] = true;
          w = parent[w];
          trace += "→" + std::to_string(w);
        } while (w != smallest);
        out.push_back({smallest, "cycle", "cycle through " + trace});
        outcome = 3;
        break;
      }
      state[v] = 1;
      path.push_back(v);
      v = parent[v];
    }
    for (int p : path) state[p] = outcome;
  }
  for (const Token& t : s.tokens) {
    if (state[t.id] == 3 && !on_cycle[t.id] && parent[t.id] >= 0)
      out.push_back({t.id, "not connected",
                     "token " + std::to_string(t.id) + " does not reach the root"});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Violation& a, const Violation& b) { return a.token_id < b.token_id; });
  return out;
}

}  // namespace wbtree::conllu
