#include "wbtree/service.hpp"

#include <charconv>
#include <set>

#include <httplib.h>

#include "wbtree/align.hpp"
#include "wbtree/diff.hpp"
#include "wbtree/eval.hpp"
#include "wbtree/json_report.hpp"
#include "wbtree/text.hpp"

namespace wbtree::service {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultLimit = 20;
constexpr std::size_t kMaxLimit = 1000;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Response error(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

Response ok(const json& body) { return {200, body.dump()}; }

std::optional<std::size_t> to_size(std::string_view s) {
  std::size_t v = 0;
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Missing parameter -> fallback (or bad request when there is none);
// non-numeric -> bad request.
struct Params {
  const Query& q;
  std::optional<Response> failure;

  const std::string* text(const std::string& key) {
    const auto it = q.find(key);
    if (it == q.end()) {
      if (!failure) failure = error(400, "missing parameter '" + key + "'");
      return nullptr;
    }
    return &it->second;
  }

  std::size_t number(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
    const auto it = q.find(key);
    if (it == q.end()) {
      if (fallback) return *fallback;
      if (!failure) failure = error(400, "missing parameter '" + key + "'");
      return 0;
    }
    const auto v = to_size(it->second);
    if (!v) {
      if (!failure) failure = error(400, "parameter '" + key + "' must be a non-negative integer");
      return 0;
    }
    return *v;
  }
};

json optional_id(const conllu::Sentence& s) {
  const auto id = s.sent_id();
  return id ? json(*id) : json(nullptr);
}

}  // namespace

SchemeCatalog::SchemeCatalog(std::vector<Scheme> schemes) : schemes_(std::move(schemes)) {
  std::set<std::string, std::less<>> ids;
  for (const auto& s : schemes_) {
    if (s.id.empty()) throw LoadError("scheme id must not be empty");
    if (!ids.insert(s.id).second) throw LoadError("duplicate scheme id '" + s.id + "'");
  }
  if (schemes_.empty()) return;

  const Scheme& ref = schemes_.front();
  std::vector<std::u32string> texts;
  texts.reserve(ref.document.sentences.size());
  for (std::size_t i = 0; i < ref.document.sentences.size(); ++i) {
    try {
      texts.push_back(align::normalized_index(ref.document.sentences[i]).chars);
    } catch (const std::exception& e) {
      throw LoadError("scheme '" + ref.id + "', sentence " + std::to_string(i) + ": " + e.what());
    }
  }
  for (std::size_t k = 1; k < schemes_.size(); ++k) {
    const Scheme& other = schemes_[k];
    const auto& sentences = other.document.sentences;
    const std::size_t common = std::min(sentences.size(), texts.size());
    for (std::size_t i = 0; i < common; ++i) {
      std::u32string chars;
      try {
        chars = align::normalized_index(sentences[i]).chars;
      } catch (const std::exception& e) {
        throw LoadError("scheme '" + other.id + "', sentence " + std::to_string(i) + ": " + e.what());
      }
      if (chars != texts[i])
        throw LoadError("scheme '" + other.id + "', sentence " + std::to_string(i) +
                        ": text differs from scheme '" + ref.id + "'");
    }
    if (sentences.size() != texts.size())
      throw LoadError("scheme '" + other.id + "' has " + std::to_string(sentences.size()) +
                      " sentences, scheme '" + ref.id + "' has " + std::to_string(texts.size()) +
                      "; first unmatched sentence index " + std::to_string(common));
  }
}

const Scheme* SchemeCatalog::find(std::string_view id) const {
  for (const auto& s : schemes_)
    if (s.id == id) return &s;
  return nullptr;
}

std::size_t SchemeCatalog::sentence_count() const {
  return schemes_.empty() ? 0 : schemes_.front().document.sentences.size();
}

SchemeFiles parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  SchemeFiles out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto line = trim(raw.ends_with('\r') ? raw.substr(0, raw.size() - 1) : raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw LoadError("config line " + std::to_string(line_no) + ": expected id=path");
    const auto id = trim(line.substr(0, eq));
    const auto path = trim(line.substr(eq + 1));
    if (id.empty() || path.empty())
      throw LoadError("config line " + std::to_string(line_no) + ": expected id=path");
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    out.emplace_back(std::string(id), p);
  }
  return out;
}

SchemeCatalog load_catalog(const SchemeFiles& files) {
  std::vector<Scheme> schemes;
  for (const auto& [id, path] : files) {
    try {
      schemes.push_back({id, conllu::read_document(path), path.string()});
    } catch (const std::exception& e) {
      throw LoadError("scheme '" + id + "': " + e.what());
    }
  }
  return SchemeCatalog(std::move(schemes));
}

Response Api::handle(std::string_view path, const Query& query) const {
  if (path == "/api/schemes") return schemes();
  if (path == "/api/sentences") return sentences(query);
  if (path == "/api/parse") return parse(query);
  if (path == "/api/diff") return diff(query);
  if (path == "/api/eval") return eval(query);
  return error(404, "unknown endpoint " + std::string(path));
}

Response Api::schemes() const {
  json list = json::array();
  for (const auto& s : catalog_.schemes())
    list.push_back({{"id", s.id},
                    {"provenance", s.provenance},
                    {"sentence_count", s.document.sentences.size()}});
  return ok({{"schemes", std::move(list)}, {"sentence_count", catalog_.sentence_count()}});
}

Response Api::sentences(const Query& q) const {
  Params p{q, std::nullopt};
  const auto* id = p.text("scheme");
  const auto offset = p.number("offset", 0);
  const auto limit = p.number("limit", kDefaultLimit);
  if (p.failure) return *p.failure;
  if (limit > kMaxLimit) return error(400, "limit must not exceed " + std::to_string(kMaxLimit));
  const Scheme* scheme = catalog_.find(*id);
  if (!scheme) return error(404, "unknown scheme '" + *id + "'");

  const auto& all = scheme->document.sentences;
  json list = json::array();
  for (std::size_t i = offset; i < all.size() && i < offset + limit; ++i)
    list.push_back({{"index", i},
                    {"sent_id", optional_id(all[i])},
                    {"text", text::encode(align::normalized_index(all[i]).chars)},
                    {"raw_text", align::raw_text(all[i])}});
  return ok({{"scheme", scheme->id},
             {"offset", offset},
             {"limit", limit},
             {"total", all.size()},
             {"sentences", std::move(list)}});
}

Response Api::parse(const Query& q) const {
  Params p{q, std::nullopt};
  const auto* id = p.text("scheme");
  const auto sent = p.number("sent");
  if (p.failure) return *p.failure;
  const Scheme* scheme = catalog_.find(*id);
  if (!scheme) return error(404, "unknown scheme '" + *id + "'");
  if (sent >= scheme->document.sentences.size())
    return error(404, "sentence " + std::to_string(sent) + " out of range");
  const auto& s = scheme->document.sentences[sent];
  json body = report::parse(s);
  body["scheme"] = scheme->id;
  body["index"] = sent;
  body["sent_id"] = optional_id(s);
  return ok(body);
}

Response Api::diff(const Query& q) const {
  Params p{q, std::nullopt};
  const auto* left_id = p.text("left");
  const auto* right_id = p.text("right");
  const auto sent = p.number("sent");
  if (p.failure) return *p.failure;
  const Scheme* left = catalog_.find(*left_id);
  if (!left) return error(404, "unknown scheme '" + *left_id + "'");
  const Scheme* right = catalog_.find(*right_id);
  if (!right) return error(404, "unknown scheme '" + *right_id + "'");
  if (sent >= catalog_.sentence_count())
    return error(404, "sentence " + std::to_string(sent) + " out of range");
  try {
    json body = report::parse_diff(
        diff::diff_parses(left->document.sentences[sent], right->document.sentences[sent]));
    body["left"] = left->id;
    body["right"] = right->id;
    body["index"] = sent;
    return ok(body);
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

Response Api::eval(const Query& q) const {
  Params p{q, std::nullopt};
  const auto* left_id = p.text("left");
  const auto* right_id = p.text("right");
  if (p.failure) return *p.failure;
  const Scheme* left = catalog_.find(*left_id);
  if (!left) return error(404, "unknown scheme '" + *left_id + "'");
  const Scheme* right = catalog_.find(*right_id);
  if (!right) return error(404, "unknown scheme '" + *right_id + "'");

  json body{{"left", left->id}, {"right", right->id}};
  try {
    const auto seg = eval::corpus_eval(left->document, right->document, eval::Mode::segmentation);
    body["segmentation"] = report::segmentation(std::get<eval::SegReport>(seg.total));
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
  try {
    const auto att = eval::corpus_eval(left->document, right->document, eval::Mode::attachment);
    body["attachment"] = report::attachment(std::get<eval::AttachmentReport>(att.total));
  } catch (const eval::EvalError&) {
    body["attachment"] = nullptr;  // tokenizations differ
  }
  return ok(body);
}

struct Server::Impl {
  const SchemeCatalog& catalog;
  Api api;
  httplib::Server http;
};

Server::Server(const SchemeCatalog& catalog, std::optional<std::filesystem::path> static_dir)
    : impl_(new Impl{catalog, Api(catalog), {}}) {
  auto& http = impl_->http;
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Methods", "GET, OPTIONS"}});
  http.Get(R"(/api/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const Response r = impl_->api.handle(req.path, query);
    res.status = r.status;
    res.set_content(r.body, r.content_type + "; charset=utf-8");
  });
  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  if (static_dir && !http.set_mount_point("/", static_dir->string()))
    throw std::runtime_error("static directory not found: " + static_dir->string());
}

Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
  auto& http = impl_->http;
  if (port == 0) {
    const int bound = http.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!http.bind_to_port(host, port))
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }
void Server::stop() { impl_->http.stop(); }
void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

std::pair<std::string, int> parse_bind_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw std::invalid_argument("bind address must look like host:port");
  const auto port = to_size(address.substr(colon + 1));
  if (!port || *port > 65535) throw std::invalid_argument("invalid port in bind address");
  auto host = address.substr(0, colon);
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  return {std::string(host), static_cast<int>(*port)};
}

}  // namespace wbtree::service
