#include "wbtree/diff.hpp"

#include <algorithm>

#include "wbtree/text.hpp"

namespace wbtree::diff {

namespace {

HeadRef head_ref(const conllu::Sentence& s, const align::NormalizedText& index, int id) {
  const auto& head = s.tokens[id - 1].head;
  HeadRef ref;
  if (!head) return ref;
  if (*head == 0) {
    ref.root = true;
  } else if (*head >= 1 && *head <= static_cast<int>(index.spans.size())) {
    ref.span = index.spans[*head - 1];
  }
  return ref;
}

bool usable(const HeadRef& h) { return h.root || h.span.has_value(); }

std::string format_head(const HeadRef& h, const std::u32string& text) {
  if (h.root) return "ROOT";
  if (!h.span) return "?";
  return text::encode(std::u32string_view(text).substr(h.span->start, h.span->size()));
}

std::string span_str(const align::CharSpan& s) {
  return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + ")";
}

std::string forms(const conllu::Sentence& s, const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out.push_back(' ');
    out += s.tokens[id - 1].form;
  }
  return out;
}

}  // namespace

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::identical: return "identical";
    case EditKind::merge: return "merge";
    case EditKind::split: return "split";
    case EditKind::divergent: return "divergent";
  }
  return "unknown";
}

std::string_view to_string(Agreement agreement) {
  switch (agreement) {
    case Agreement::both: return "both";
    case Agreement::head_only: return "head-only";
    case Agreement::neither: return "neither";
  }
  return "unknown";
}

ParseDiff diff_parses(const conllu::Sentence& left, const conllu::Sentence& right) {
  const auto li = align::normalized_index(left);
  const auto ri = align::normalized_index(right);
  if (li.chars != ri.chars) {
    const auto mis =
        std::mismatch(li.chars.begin(), li.chars.end(), ri.chars.begin(), ri.chars.end());
    const auto offset = static_cast<std::size_t>(mis.first - li.chars.begin());
    throw DiffError("character sequences differ at char " + std::to_string(offset), offset);
  }

  ParseDiff d;
  d.text = li.chars;
  const std::size_t nl = li.spans.size();
  const std::size_t nr = ri.spans.size();
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t start = 0;
  while (a < nl && b < nr) {
    TokenAlignmentEdit e;
    e.left_ids.push_back(static_cast<int>(a) + 1);
    e.right_ids.push_back(static_cast<int>(b) + 1);
    std::size_t le = li.spans[a].end;
    std::size_t re = ri.spans[b].end;
    while (le != re) {
      if (le < re) {
        ++a;
        e.left_ids.push_back(static_cast<int>(a) + 1);
        le = li.spans[a].end;
      } else {
        ++b;
        e.right_ids.push_back(static_cast<int>(b) + 1);
        re = ri.spans[b].end;
      }
    }
    e.span = {start, le};
    const auto nleft = e.left_ids.size();
    const auto nright = e.right_ids.size();
    if (nleft == 1 && nright == 1) {
      e.kind = EditKind::identical;
      ++d.summary.identical;
    } else if (nright == 1) {
      e.kind = EditKind::merge;
      ++d.summary.merge;
    } else if (nleft == 1) {
      e.kind = EditKind::split;
      ++d.summary.split;
    } else {
      e.kind = EditKind::divergent;
      ++d.summary.divergent;
    }
    if (e.kind != EditKind::identical) {
      d.summary.incomparable_left += nleft;
      d.summary.incomparable_right += nright;
    }
    d.edits.push_back(std::move(e));
    start = le;
    ++a;
    ++b;
  }

  for (const auto& e : d.edits) {
    if (e.kind != EditKind::identical) continue;
    const int l = e.left_ids.front();
    const int r = e.right_ids.front();
    EdgeComparison c;
    c.dependent_span = e.span;
    c.left_id = l;
    c.right_id = r;
    c.left_head = head_ref(left, li, l);
    c.right_head = head_ref(right, ri, r);
    c.left_label = left.tokens[l - 1].deprel;
    c.right_label = right.tokens[r - 1].deprel;
    const bool head_match = usable(c.left_head) && c.left_head == c.right_head;
    const bool label_match = c.left_label && c.left_label == c.right_label;
    if (head_match && label_match) {
      c.agreement = Agreement::both;
      ++d.summary.both;
    } else if (head_match) {
      c.agreement = Agreement::head_only;
      ++d.summary.head_only;
    } else {
      c.agreement = Agreement::neither;
      ++d.summary.neither;
    }
    d.edges.push_back(std::move(c));
  }
  return d;
}

ParseDiff mirror(const ParseDiff& d) {
  ParseDiff m;
  m.text = d.text;
  for (const auto& e : d.edits) {
    TokenAlignmentEdit f = e;
    std::swap(f.left_ids, f.right_ids);
    if (e.kind == EditKind::merge) f.kind = EditKind::split;
    if (e.kind == EditKind::split) f.kind = EditKind::merge;
    m.edits.push_back(std::move(f));
  }
  for (const auto& c : d.edges) {
    EdgeComparison f = c;
    std::swap(f.left_id, f.right_id);
    std::swap(f.left_head, f.right_head);
    std::swap(f.left_label, f.right_label);
    m.edges.push_back(std::move(f));
  }
  m.summary = d.summary;
  std::swap(m.summary.merge, m.summary.split);
  std::swap(m.summary.incomparable_left, m.summary.incomparable_right);
  return m;
}

std::string render_text(const ParseDiff& d, const conllu::Sentence& left,
                        const conllu::Sentence& right) {
  std::string out = "text: " + text::encode(d.text) + "\n";
  for (const auto& e : d.edits) {
    const char mark = e.kind == EditKind::identical ? '=' : '~';
    out += std::string(1, mark) + " " + std::string(to_string(e.kind)) + " " + span_str(e.span) +
           "  " + forms(left, e.left_ids) + " | " + forms(right, e.right_ids) + "\n";
  }
  for (const auto& c : d.edges) {
    if (c.agreement == Agreement::both) continue;
    const auto dep = text::encode(
        std::u32string_view(d.text).substr(c.dependent_span.start, c.dependent_span.size()));
    out += "! " + std::string(to_string(c.agreement)) + " " + dep + ": " +
           format_head(c.left_head, d.text) + " (" + c.left_label.value_or("_") + ") | " +
           format_head(c.right_head, d.text) + " (" + c.right_label.value_or("_") + ")\n";
  }
  const auto& s = d.summary;
  out += "summary: identical=" + std::to_string(s.identical) + " merge=" + std::to_string(s.merge) +
         " split=" + std::to_string(s.split) + " divergent=" + std::to_string(s.divergent) +
         " both=" + std::to_string(s.both) + " head-only=" + std::to_string(s.head_only) +
         " neither=" + std::to_string(s.neither) +
         " incomparable=" + std::to_string(s.incomparable_left) + "/" +
         std::to_string(s.incomparable_right) + "\n";
  return out;
}

}  // namespace wbtree::diff
