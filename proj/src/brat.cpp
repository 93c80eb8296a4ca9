#include "wbtree/brat.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "wbtree/align.hpp"

namespace wbtree::brat {

StandoffDocument to_standoff(const conllu::Sentence& s) {
  StandoffDocument out;
  out.text = align::raw_text(s) + "\n";
  const auto spans = align::char_index(s);
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 0; i < n; ++i) {
    const auto& t = s.tokens[i];
    out.annotations += "T" + std::to_string(t.id) + "\t" + t.upos.value_or("Token") + " " +
                       std::to_string(spans[i].start) + " " + std::to_string(spans[i].end) + "\t" +
                       t.form + "\n";
  }
  int relation = 0;
  for (const auto& t : s.tokens) {
    if (!t.head || *t.head < 1 || *t.head > n) continue;
    out.annotations += "R" + std::to_string(++relation) + "\t" + t.deprel.value_or("dep") +
                       " Arg1:T" + std::to_string(*t.head) + " Arg2:T" + std::to_string(t.id) +
                       "\n";
  }
  return out;
}

std::string file_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", index);
  return buf;
}

std::vector<std::filesystem::path> export_document(const conllu::Document& doc,
                                                   const std::filesystem::path& outdir) {
  std::vector<StandoffDocument> docs;
  docs.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) docs.push_back(to_standoff(s));

  std::filesystem::create_directories(outdir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  };
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto stem = file_stem(i);
    write(outdir / (stem + ".txt"), docs[i].text);
    write(outdir / (stem + ".ann"), docs[i].annotations);
  }
  return written;
}

}  // namespace wbtree::brat
