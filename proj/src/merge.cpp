#include "wbtree/merge.hpp"

#include <algorithm>
#include <charconv>

#include "wbtree/text.hpp"

namespace wbtree::merge {

namespace {

using align::MergeGroup;
using conllu::Sentence;
using conllu::Token;

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Does an opaque row sit inside, or cover part of, a multi-token group?
bool touches_group(const conllu::OpaqueRow& row, const MergeGroup& g) {
  const std::string_view id = row.fields.empty() ? std::string_view{} : row.fields[0];
  if (row.kind == conllu::RowKind::multiword_range) {
    const auto dash = id.find('-');
    const auto lo = to_int(id.substr(0, dash));
    const auto hi = to_int(id.substr(dash + 1));
    return !lo || !hi || (*lo <= g.last && *hi >= g.first);
  }
  const auto major = to_int(id.substr(0, id.find('.')));
  return !major || (*major >= g.first && *major < g.last);
}

std::vector<bool> internal_spaces(const Sentence& s, const MergeGroup& g) {
  std::vector<bool> spaces;
  for (int id = g.first; id < g.last; ++id) {
    const Token& left = s.tokens[id - 1];
    const Token& right = s.tokens[id];
    spaces.push_back(left.space_after() &&
                     (text::has_foreign_letter(left.form) || text::has_foreign_letter(right.form)));
  }
  return spaces;
}

template <class Get>
std::string join_members(const Sentence& s, const MergeGroup& g, const std::vector<bool>& spaces,
                         Get get) {
  std::string out;
  for (int id = g.first; id <= g.last; ++id) {
    if (id > g.first && spaces[id - g.first - 1]) out.push_back(' ');
    out += get(s.tokens[id - 1]);
  }
  return out;
}

std::vector<int> external_members(const Sentence& s, const MergeGroup& g) {
  std::vector<int> out;
  for (int id = g.first; id <= g.last; ++id) {
    const auto& head = s.tokens[id - 1].head;
    if (head && (*head < g.first || *head > g.last)) out.push_back(id);
  }
  return out;
}

// Rewrites `h:rel|h:rel` with new ids. Returns nullopt when an edge points at
// a fused-away token or cannot be renumbered.
std::optional<std::string> remap_deps(std::string_view deps, const std::vector<int>& new_id,
                                      const std::vector<bool>& merged) {
  std::string out;
  std::size_t start = 0;
  for (;;) {
    const auto bar = deps.find('|', start);
    const auto item = deps.substr(start, bar == std::string_view::npos ? bar : bar - start);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto head = to_int(item.substr(0, colon));
    if (!head || *head < 0 || *head >= static_cast<int>(new_id.size()) || merged[*head])
      return std::nullopt;
    if (!out.empty()) out.push_back('|');
    out += std::to_string(new_id[*head]);
    out += item.substr(colon);
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace

void MergePolicy::validate() const {
  if (xpos_delimiter.empty()) throw std::invalid_argument("xpos delimiter must not be empty");
  if (xpos_delimiter.find('\t') != std::string::npos)
    throw std::invalid_argument("xpos delimiter must not contain a tab");
}

Legality check_legality(const Sentence& s, const MergeGroup& g, const MergePolicy& policy) {
  Legality out;
  for (int id = g.first; id <= g.last; ++id) {
    if (!s.tokens[id - 1].head) {
      out.reason = "unannotated head";
      return out;
    }
  }
  out.external_head_members = external_members(s, g);
  if (g.first < g.last) {
    for (const auto& row : s.opaque_rows) {
      if (touches_group(row, g)) {
        out.reason = "unsupported node type";
        return out;
      }
    }
  }
  const auto n = out.external_head_members.size();
  if (n == 1) {
    out.legal = true;
  } else if (n > 1 && policy.lexicon_override.contains(fused_form(s, g))) {
    out.legal = true;
  } else if (n == 0) {
    out.reason = "no member attaches outside the group";
  } else {
    std::string ids;
    for (int m : out.external_head_members) ids += (ids.empty() ? "" : ",") + std::to_string(m);
    out.reason = "multiple external heads (" + ids + ")";
  }
  return out;
}

std::string fused_form(const Sentence& s, const MergeGroup& g) {
  return join_members(s, g, internal_spaces(s, g), [](const Token& t) { return t.form; });
}

Token fuse_group(const Sentence& s, const MergeGroup& g, const std::optional<std::string>& upos,
                 const MergePolicy& policy) {
  if (g.first == g.last) {
    Token t = s.tokens[g.first - 1];
    if (upos) t.upos = upos;
    return t;
  }
  const auto externals = external_members(s, g);
  const Token& head_member = s.tokens[(externals.empty() ? g.last : externals.front()) - 1];
  const Token& first_member = s.tokens[g.first - 1];
  const Token& last_member = s.tokens[g.last - 1];
  const auto spaces = internal_spaces(s, g);

  auto all_set = [&](auto field) {
    for (int id = g.first; id <= g.last; ++id)
      if (!(s.tokens[id - 1].*field)) return false;
    return true;
  };

  Token out;
  out.id = g.first;
  out.form = join_members(s, g, spaces, [](const Token& t) { return t.form; });
  if (all_set(&Token::lemma))
    out.lemma = join_members(s, g, spaces, [](const Token& t) { return *t.lemma; });
  if (all_set(&Token::xpos)) {
    std::string xpos;
    for (int id = g.first; id <= g.last; ++id) {
      if (id > g.first) xpos += policy.xpos_delimiter;
      xpos += *s.tokens[id - 1].xpos;
    }
    out.xpos = std::move(xpos);
  }
  if (upos)
    out.upos = upos;
  else
    out.upos = policy.upos_fallback == UposFallback::head_token ? head_member.upos
                                                                : first_member.upos;
  out.feats = head_member.feats;
  out.head = head_member.head;
  out.deprel = head_member.deprel;
  out.deps = std::nullopt;

  conllu::AttrList misc = head_member.misc.value_or(conllu::AttrList{});
  if (last_member.space_after())
    misc.erase("SpaceAfter");
  else
    misc.set("SpaceAfter", "No");
  if (!misc.empty()) out.misc = std::move(misc);
  return out;
}

std::string ConversionLog::line() const {
  std::string reasons;
  auto add = [&](const std::string& r) {
    if (!reasons.empty()) reasons += "; ";
    reasons += r;
  };
  for (const auto& r : rejected)
    add(std::to_string(r.first) + "-" + std::to_string(r.last) + ": " + r.reason);
  for (const auto& n : notes) add(n);
  if (reasons.empty()) reasons = "_";
  return sent_id + "\t" + std::to_string(merged) + "\t" + std::to_string(rejected.size()) + "\t" +
         reasons;
}

namespace {

struct Plan {
  std::vector<const MergeGroup*> fused;  // groups that will be merged
  std::vector<int> override_groups;      // indexes into `groups` merged by override with >1 head
};

ConvertedSentence build(const Sentence& s, std::span<const MergeGroup> groups,
                        std::span<const std::optional<std::string>> upos,
                        const MergePolicy& policy, const std::vector<bool>& merge_group) {
  const int n = static_cast<int>(s.tokens.size());
  ConvertedSentence out;
  out.sentence.comments = s.comments;

  std::vector<int> new_id(n + 1, 0);
  std::vector<bool> merged_member(n + 1, false);
  int next = 0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    if (merge_group[gi]) {
      ++next;
      for (int id = g.first; id <= g.last; ++id) {
        new_id[id] = next;
        merged_member[id] = true;
      }
    } else {
      for (int id = g.first; id <= g.last; ++id) new_id[id] = ++next;
    }
  }
  const bool any_merge = std::find(merge_group.begin(), merge_group.end(), true) != merge_group.end();

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    if (merge_group[gi]) {
      const std::optional<std::string> tag = upos.empty() ? std::nullopt : upos[gi];
      out.sentence.tokens.push_back(fuse_group(s, g, tag, policy));
    } else {
      for (int id = g.first; id <= g.last; ++id) out.sentence.tokens.push_back(s.tokens[id - 1]);
    }
  }
  for (auto& t : out.sentence.tokens) {
    t.id = new_id[t.id];
    if (!any_merge) continue;
    if (t.head && *t.head >= 1 && *t.head <= n) t.head = new_id[*t.head];
    if (t.deps) t.deps = remap_deps(*t.deps, new_id, merged_member);
  }

  for (const auto& row : s.opaque_rows) {
    conllu::OpaqueRow r = row;
    if (any_merge) {
      r.before = row.before == 0 ? 0 : static_cast<std::size_t>(new_id[row.before]);
      std::string_view id = row.fields[0];
      auto renumber = [&](std::string_view part) {
        const auto v = to_int(part);
        return v && *v >= 1 && *v <= n ? std::to_string(new_id[*v]) : std::string(part);
      };
      if (row.kind == conllu::RowKind::multiword_range) {
        const auto dash = id.find('-');
        r.fields[0] = renumber(id.substr(0, dash)) + "-" + renumber(id.substr(dash + 1));
      } else {
        const auto dot = id.find('.');
        r.fields[0] = renumber(id.substr(0, dot)) + std::string(id.substr(dot));
        if (r.fields.size() > 8 && r.fields[8] != "_") {
          const auto deps = remap_deps(r.fields[8], new_id, merged_member);
          r.fields[8] = deps ? *deps : "_";
        }
      }
    }
    out.sentence.opaque_rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ConvertedSentence apply_merges(const Sentence& s, std::span<const MergeGroup> groups,
                               std::span<const std::optional<std::string>> upos,
                               const MergePolicy& policy, std::size_t sentence_index) {
  const int n = static_cast<int>(s.tokens.size());
  int expect = 1;
  for (const auto& g : groups) {
    if (g.first != expect || g.last < g.first || g.last > n)
      throw std::invalid_argument("merge groups do not cover the sentence in order");
    expect = g.last + 1;
  }
  if (expect != n + 1) throw std::invalid_argument("merge groups do not cover the sentence");
  if (!upos.empty() && upos.size() != groups.size())
    throw std::invalid_argument("UPOS list must be parallel to the merge groups");

  ConversionLog log;
  log.sentence_index = sentence_index;
  log.sent_id = s.sent_id().value_or(std::to_string(sentence_index));
  log.tokens_before = n;

  std::vector<bool> merge_group(groups.size(), false);
  std::vector<std::size_t> overridden;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    if (g.first == g.last) continue;
    const Legality legality = check_legality(s, g, policy);
    if (legality.legal) {
      merge_group[gi] = true;
      if (legality.external_head_members.size() > 1) overridden.push_back(gi);
    } else {
      log.rejected.push_back({g.first, g.last, legality.reason});
    }
  }
  if (!log.rejected.empty() && policy.on_illegal == OnIllegal::reject_sentence) {
    log.tokens_after = n;
    log.notes.push_back("sentence rejected");
    throw ConversionError("sentence " + log.sent_id + ": illegal merge group", std::move(log));
  }

  ConvertedSentence out = build(s, groups, upos, policy, merge_group);
  if (!overridden.empty() && !conllu::validate_sentence(out.sentence).empty() &&
      conllu::validate_sentence(s).empty()) {
    // The leftmost-head choice for an override broke the tree; keep those
    // groups unmerged instead.
    for (auto gi : overridden) {
      merge_group[gi] = false;
      log.rejected.push_back({groups[gi].first, groups[gi].last, "override would break the tree"});
    }
    overridden.clear();
    if (policy.on_illegal == OnIllegal::reject_sentence) {
      log.tokens_after = n;
      log.notes.push_back("sentence rejected");
      throw ConversionError("sentence " + log.sent_id + ": illegal merge group", std::move(log));
    }
    out = build(s, groups, upos, policy, merge_group);
  }
  for (auto gi : overridden)
    log.notes.push_back("override " + std::to_string(groups[gi].first) + "-" +
                        std::to_string(groups[gi].last) + " took leftmost external head");

  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    if (merge_group[gi]) ++log.merged;
  log.tokens_after = static_cast<int>(out.sentence.tokens.size());
  out.log = std::move(log);
  return out;
}

CorpusConversion convert_corpus(const conllu::Document& gold,
                                const std::vector<std::vector<std::string>>& segmented,
                                const conllu::Document& predicted, const MergePolicy& policy,
                                align::NormalizeOptions opts) {
  policy.validate();
  const auto n = gold.sentences.size();
  if (segmented.size() != n || predicted.sentences.size() != n)
    throw InputError("sentence counts differ: gold " + std::to_string(n) + ", segmented " +
                     std::to_string(segmented.size()) + ", predicted " +
                     std::to_string(predicted.sentences.size()));

  CorpusConversion out;
  out.document.source_name = gold.source_name;
  out.document.sentences.reserve(n);
  out.logs.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Sentence& s = gold.sentences[i];
    auto passthrough = [&](ConversionLog log, std::string note) {
      log.sentence_index = i;
      log.sent_id = s.sent_id().value_or(std::to_string(i));
      log.tokens_before = log.tokens_after = static_cast<int>(s.tokens.size());
      log.merged = 0;
      if (!note.empty()) log.notes.push_back(std::move(note));
      out.document.sentences.push_back(s);
      out.logs.push_back(std::move(log));
    };

    align::AlignmentResult alignment;
    try {
      alignment = align::align_tokenizations(s, segmented[i], opts);
    } catch (const std::invalid_argument& e) {
      passthrough({}, std::string("alignment failed: ") + e.what());
      continue;
    }
    if (!alignment.aligned()) {
      passthrough({}, "alignment mismatch: " + alignment.describe());
      continue;
    }

    std::optional<align::NormalizedText> pred_index;
    try {
      pred_index = align::normalized_index(predicted.sentences[i], opts);
    } catch (const std::invalid_argument&) {
    }
    const auto gold_index = align::normalized_index(s, opts);

    std::vector<std::optional<std::string>> upos(alignment.groups.size());
    std::vector<std::string> fallback_notes;
    for (std::size_t gi = 0; gi < alignment.groups.size(); ++gi) {
      const auto& g = alignment.groups[gi];
      if (g.first == g.last) continue;
      const align::CharSpan span{gold_index.spans[g.first - 1].start,
                                 gold_index.spans[g.last - 1].end};
      if (pred_index) {
        const auto& ps = pred_index->spans;
        const auto it = std::find(ps.begin(), ps.end(), span);
        if (it != ps.end()) {
          const auto& tok = predicted.sentences[i].tokens[it - ps.begin()];
          const bool same_chars = pred_index->chars.compare(span.start, span.size(), gold_index.chars,
                                                            span.start, span.size()) == 0;
          if (same_chars && tok.upos) upos[gi] = tok.upos;
        }
      }
      if (!upos[gi])
        fallback_notes.push_back("upos fallback " + std::to_string(g.first) + "-" +
                                 std::to_string(g.last));
    }

    try {
      auto converted = apply_merges(s, alignment.groups, upos, policy, i);
      // Only report fallbacks for groups that were actually fused.
      for (auto& note : fallback_notes) {
        const auto range = note.substr(std::string_view("upos fallback ").size());
        const bool rejected = std::any_of(
            converted.log.rejected.begin(), converted.log.rejected.end(), [&](const Rejection& r) {
              return std::to_string(r.first) + "-" + std::to_string(r.last) == range;
            });
        if (!rejected) converted.log.notes.push_back(std::move(note));
      }
      out.document.sentences.push_back(std::move(converted.sentence));
      out.logs.push_back(std::move(converted.log));
    } catch (const ConversionError& e) {
      passthrough(e.log(), {});
    }
  }
  return out;
}

std::string format_logs(std::span<const ConversionLog> logs) {
  std::string out;
  for (const auto& log : logs) {
    out += log.line();
    out.push_back('\n');
  }
  return out;
}

}  // namespace wbtree::merge
