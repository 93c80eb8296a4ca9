#ifndef WBTREE_JSON_REPORT_HPP
#define WBTREE_JSON_REPORT_HPP

#include <json.hpp>

#include "wbtree/align.hpp"
#include "wbtree/conllu.hpp"
#include "wbtree/diff.hpp"
#include "wbtree/eval.hpp"

// Structured forms of the reports consumed by the HTTP service.
namespace wbtree::report {

using nlohmann::json;

json span(const align::CharSpan& s);
json attachment(const eval::AttachmentReport& r);
json segmentation(const eval::SegReport& r);
json corpus_report(const eval::CorpusReport& r);
json parse_diff(const diff::ParseDiff& d);

/// Tokens (id, form, span, upos, xpos, space_after) and edges
/// (dependent, head, deprel). Spans tile `text`, the whitespace-normalized
/// sentence; `raw_text` keeps SpaceAfter spacing for display.
json parse(const conllu::Sentence& s);

}  // namespace wbtree::report

#endif  // WBTREE_JSON_REPORT_HPP
