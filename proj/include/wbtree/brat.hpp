#ifndef WBTREE_BRAT_HPP
#define WBTREE_BRAT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "wbtree/conllu.hpp"

namespace wbtree::brat {

/// A brat standoff pair: raw text plus `.ann` lines addressing it.
/// Tokens become `T<id>` entities typed by UPOS; each non-root head link
/// becomes `R<n> TAB <deprel> Arg1:T<head> Arg2:T<dependent>`.
struct StandoffDocument {
  std::string text;
  std::string annotations;
};

StandoffDocument to_standoff(const conllu::Sentence& s);

/// File stem for the i-th sentence (zero-padded index).
std::string file_stem(std::size_t index);

/// Writes `<stem>.txt` and `<stem>.ann` for every sentence. Returns the
/// written paths.
std::vector<std::filesystem::path> export_document(const conllu::Document& doc,
                                                   const std::filesystem::path& outdir);

}  // namespace wbtree::brat

#endif  // WBTREE_BRAT_HPP
