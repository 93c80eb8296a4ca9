#include "wbtree/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wbtree/align.hpp"
#include "wbtree/brat.hpp"
#include "wbtree/conllu.hpp"
#include "wbtree/diff.hpp"
#include "wbtree/eval.hpp"
#include "wbtree/json_report.hpp"
#include "wbtree/merge.hpp"
#include "wbtree/service.hpp"

namespace wbtree::cli {

namespace {

namespace fs = std::filesystem;

// Raised for anything that maps to exit status 2.
struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

conllu::Document load(const std::string& path) {
  try {
    return conllu::read_document(path);
  } catch (const std::exception& e) {
    throw InputFailure(path + ": " + e.what());
  }
}

// All-or-nothing: contents go to temporary siblings first, then get renamed.
void write_files(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> temps;
  for (const auto& [path, content] : files) {
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
      for (const auto& t : temps) fs::remove(t);
      fs::remove(tmp);
      throw InputFailure("cannot write " + path.string());
    }
    temps.push_back(tmp);
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
}

std::set<std::string> read_lexicon(const std::string& path) {
  std::set<std::string> out;
  std::string content;
  try {
    content = conllu::read_file(path);
  } catch (const std::exception& e) {
    throw InputFailure(e.what());
  }
  std::string_view rest(content);
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    auto line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    out.emplace(line);
  }
  return out;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const auto doc = load(path);
  std::size_t total = 0;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto& s = doc.sentences[i];
    for (const auto& v : conllu::validate_sentence(s)) {
      ++total;
      out << s.sent_id().value_or(std::to_string(i)) << '\t' << v.token_id << '\t' << v.rule
          << '\t' << v.message << '\n';
    }
  }
  out << doc.sentences.size() << " sentences, " << total << " violations\n";
  return total == 0 ? kOk : kFindings;
}

struct ConvertArgs {
  std::string gold, seg, pred, out, log;
  std::string on_illegal = "reject-group";
  std::string upos_fallback = "head-token";
  std::string xpos_delimiter = "+";
  std::string lexicon;
  bool nfc = false;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  merge::MergePolicy policy;
  policy.on_illegal =
      a.on_illegal == "reject-sentence" ? merge::OnIllegal::reject_sentence : merge::OnIllegal::reject_group;
  policy.upos_fallback =
      a.upos_fallback == "first-token" ? merge::UposFallback::first_token : merge::UposFallback::head_token;
  policy.xpos_delimiter = a.xpos_delimiter;
  if (!a.lexicon.empty()) policy.lexicon_override = read_lexicon(a.lexicon);
  try {
    policy.validate();
  } catch (const std::invalid_argument& e) {
    throw InputFailure(e.what());
  }

  const auto gold = load(a.gold);
  const auto pred = load(a.pred);
  std::vector<std::vector<std::string>> seg;
  try {
    seg = align::parse_segmented(conllu::read_file(a.seg));
  } catch (const std::exception& e) {
    throw InputFailure(a.seg + ": " + e.what());
  }

  merge::CorpusConversion result;
  try {
    result = merge::convert_corpus(gold, seg, pred, policy, {a.nfc});
  } catch (const merge::InputError& e) {
    throw InputFailure(e.what());
  }

  const fs::path log_path = a.log.empty() ? fs::path(a.out + ".log") : fs::path(a.log);
  write_files({{a.out, conllu::serialize_document(result.document)},
               {log_path, merge::format_logs(result.logs)}});

  int merged = 0, rejected = 0, passthrough = 0;
  for (const auto& log : result.logs) {
    merged += log.merged;
    rejected += static_cast<int>(log.rejected.size());
    for (const auto& note : log.notes)
      if (note.starts_with("alignment")) ++passthrough;
  }
  out << result.logs.size() << " sentences, " << merged << " groups merged, " << rejected
      << " groups rejected, " << passthrough << " sentences not aligned\n";
  return kOk;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path, const std::string& mode_name,
             const std::string& json_path, std::ostream& out) {
  const auto gold = load(gold_path);
  const auto pred = load(pred_path);
  const auto mode = mode_name == "segmentation" ? eval::Mode::segmentation : eval::Mode::attachment;
  eval::CorpusReport report;
  try {
    report = eval::corpus_eval(gold, pred, mode);
  } catch (const eval::EvalError& e) {
    throw InputFailure(e.what());
  }
  if (!json_path.empty()) write_files({{json_path, report::corpus_report(report).dump(2) + "\n"}});
  out << eval::format_report(report);

  bool perfect;
  if (const auto* a = std::get_if<eval::AttachmentReport>(&report.total))
    perfect = a->head_and_label_correct == a->token_total;
  else {
    const auto& s = std::get<eval::SegReport>(report.total);
    perfect = s.matched == s.gold_spans && s.matched == s.pred_spans;
  }
  return perfect ? kOk : kFindings;
}

int cmd_diff(const std::string& left_path, const std::string& right_path,
             std::optional<std::size_t> sent, bool as_json, std::ostream& out) {
  const auto left = load(left_path);
  const auto right = load(right_path);
  if (left.sentences.size() != right.sentences.size())
    throw InputFailure("sentence counts differ: " + std::to_string(left.sentences.size()) + " vs " +
                       std::to_string(right.sentences.size()));
  std::size_t first = 0, last = left.sentences.size();
  if (sent) {
    if (*sent >= last) throw InputFailure("sentence " + std::to_string(*sent) + " out of range");
    first = *sent;
    last = *sent + 1;
  }
  bool differs = false;
  nlohmann::json all = nlohmann::json::array();
  for (std::size_t i = first; i < last; ++i) {
    const auto& a = left.sentences[i];
    const auto& b = right.sentences[i];
    diff::ParseDiff d;
    try {
      d = diff::diff_parses(a, b);
    } catch (const std::exception& e) {
      throw InputFailure("sentence " + std::to_string(i) + ": " + e.what());
    }
    const auto& s = d.summary;
    differs = differs || s.merge || s.split || s.divergent || s.head_only || s.neither;
    if (as_json) {
      auto j = report::parse_diff(d);
      j["index"] = i;
      all.push_back(std::move(j));
    } else {
      out << "# sentence " << i << (a.sent_id() ? " (" + *a.sent_id() + ")" : "") << "\n"
          << diff::render_text(d, a, b) << "\n";
    }
  }
  if (as_json) out << all.dump(2) << "\n";
  return differs ? kFindings : kOk;
}

int cmd_export_brat(const std::string& path, const std::string& outdir, std::ostream& out) {
  const auto doc = load(path);
  std::vector<std::pair<fs::path, std::string>> files;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto standoff = brat::to_standoff(doc.sentences[i]);
    const auto stem = brat::file_stem(i);
    files.emplace_back(fs::path(outdir) / (stem + ".txt"), standoff.text);
    files.emplace_back(fs::path(outdir) / (stem + ".ann"), standoff.annotations);
  }
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw InputFailure("cannot create " + outdir + ": " + ec.message());
  write_files(files);
  out << doc.sentences.size() << " sentences exported to " << outdir << "\n";
  return kOk;
}

int cmd_serve(const std::string& config, const std::string& bind, const std::string& static_dir,
              std::ostream& out) {
  std::pair<std::string, int> address;
  std::optional<service::SchemeCatalog> catalog;
  try {
    address = service::parse_bind_address(bind);
    const auto files = service::parse_config(conllu::read_file(config), fs::path(config).parent_path());
    catalog.emplace(service::load_catalog(files));
  } catch (const std::exception& e) {
    throw InputFailure(e.what());
  }
  std::optional<fs::path> statics;
  if (!static_dir.empty()) statics = static_dir;
  try {
    service::Server server(*catalog, statics);
    const int port = server.bind(address.first, address.second);
    out << "serving " << catalog->schemes().size() << " schemes on " << address.first << ":" << port
        << std::endl;
    server.listen();
  } catch (const std::exception& e) {
    throw InputFailure(e.what());
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Word-boundary conversion, evaluation and comparison for dependency treebanks",
               "wbtree"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check tree well-formedness of every sentence");
  validate->add_option("conllu", validate_path, "CoNLL-U file")->required();

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "Merge gold tokens to match a coarser segmentation");
  convert->add_option("--gold", conv.gold, "Gold CoNLL-U")->required();
  convert->add_option("--seg", conv.seg, "Segmented text, one sentence per line")->required();
  convert->add_option("--pred", conv.pred, "CoNLL-U with predicted FORM and UPOS")->required();
  convert->add_option("--out", conv.out, "Output CoNLL-U")->required();
  convert->add_option("--log", conv.log, "Conversion log (default: <out>.log)");
  convert->add_option("--on-illegal", conv.on_illegal, "reject-group or reject-sentence")
      ->check(CLI::IsMember({"reject-group", "reject-sentence"}));
  convert->add_option("--upos-fallback", conv.upos_fallback, "head-token or first-token")
      ->check(CLI::IsMember({"head-token", "first-token"}));
  convert->add_option("--xpos-delimiter", conv.xpos_delimiter, "Joiner for merged XPOS tags");
  convert->add_option("--lexicon", conv.lexicon, "Forms allowed to merge despite several heads");
  convert->add_flag("--nfc", conv.nfc, "NFC-normalize both sides before aligning");

  std::string eval_gold, eval_pred, eval_mode = "attachment", eval_json;
  auto* evalc = app.add_subcommand("eval", "Attachment scores or segmentation F1");
  evalc->add_option("--gold", eval_gold, "Gold CoNLL-U")->required();
  evalc->add_option("--pred", eval_pred, "Predicted CoNLL-U")->required();
  evalc->add_option("--mode", eval_mode, "attachment or segmentation")
      ->check(CLI::IsMember({"attachment", "segmentation"}));
  evalc->add_option("--json", eval_json, "Also write a structured report");

  std::string diff_left, diff_right;
  std::optional<std::size_t> diff_sent;
  bool diff_json = false;
  auto* diffc = app.add_subcommand("diff", "Character-aligned comparison of two parses");
  diffc->add_option("--left", diff_left, "Left CoNLL-U")->required();
  diffc->add_option("--right", diff_right, "Right CoNLL-U")->required();
  diffc->add_option("--sent", diff_sent, "0-based sentence index");
  diffc->add_flag("--json", diff_json, "Structured output");

  std::string brat_scheme, brat_outdir;
  auto* brat = app.add_subcommand("export-brat", "Write brat standoff files, one pair per sentence");
  brat->add_option("--scheme", brat_scheme, "CoNLL-U file")->required();
  brat->add_option("--outdir", brat_outdir, "Output directory")->required();

  std::string serve_config, serve_bind = "127.0.0.1:8080", serve_static;
  auto* serve = app.add_subcommand("serve", "Serve the comparison API");
  serve->add_option("--config", serve_config, "id=path lines")->required()->envname("WBTREE_CONFIG");
  serve->add_option("--bind", serve_bind, "host:port")->envname("WBTREE_BIND");
  serve->add_option("--static", serve_static, "Viewer bundle directory")->envname("WBTREE_STATIC");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) return cmd_validate(validate_path, out);
    if (*convert) return cmd_convert(conv, out);
    if (*evalc) return cmd_eval(eval_gold, eval_pred, eval_mode, eval_json, out);
    if (*diffc) return cmd_diff(diff_left, diff_right, diff_sent, diff_json, out);
    if (*brat) return cmd_export_brat(brat_scheme, brat_outdir, out);
    if (*serve) return cmd_serve(serve_config, serve_bind, serve_static, out);
  } catch (const InputFailure& e) {
    err << "wbtree: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "wbtree: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace wbtree::cli
