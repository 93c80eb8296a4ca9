#ifndef WBTREE_TESTS_SUPPORT_HPP
#define WBTREE_TESTS_SUPPORT_HPP

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wbtree/cli.hpp"
#include "wbtree/conllu.hpp"

namespace wbtree::testing {

struct Row {
  std::string form;
  int head = 0;
  std::string deprel = "dep";
  std::string upos = "NOUN";
  bool space_after = false;
  std::optional<std::string> xpos = std::nullopt;
};

inline conllu::Sentence sentence(const std::vector<Row>& rows, std::string sent_id = {}) {
  conllu::Sentence s;
  if (!sent_id.empty()) s.comments.push_back("# sent_id = " + sent_id);
  int id = 0;
  for (const Row& r : rows) {
    conllu::Token t;
    t.id = ++id;
    t.form = r.form;
    t.lemma = r.form;
    t.upos = r.upos;
    t.xpos = r.xpos;
    t.head = r.head;
    t.deprel = r.deprel;
    if (!r.space_after) t.misc = conllu::AttrList::parse("SpaceAfter=No");
    s.tokens.push_back(std::move(t));
  }
  return s;
}

/// Tokens without SpaceAfter; heads given 1-based, 0 for the root.
inline conllu::Sentence tree(const std::vector<std::string>& forms, const std::vector<int>& heads) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < forms.size(); ++i) rows.push_back({forms[i], heads[i]});
  return sentence(rows);
}

inline std::filesystem::path data_path(std::string_view rel) {
  return std::filesystem::path(WBTREE_TEST_DATA) / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("wbtree-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wbtree");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace wbtree::testing

#endif  // WBTREE_TESTS_SUPPORT_HPP
