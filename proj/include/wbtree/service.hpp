#ifndef WBTREE_SERVICE_HPP
#define WBTREE_SERVICE_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wbtree/conllu.hpp"

namespace wbtree::service {

struct Scheme {
  std::string id;  // e.g. gsd, ltp, ctb, pku
  conllu::Document document;
  std::string provenance;
};

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable set of segmentation variants of one treebank. All schemes share
/// the sentence count and, per sentence, the whitespace-normalized text.
class SchemeCatalog {
 public:
  /// Validates and takes ownership. Throws LoadError on any inconsistency.
  explicit SchemeCatalog(std::vector<Scheme> schemes);

  const std::vector<Scheme>& schemes() const { return schemes_; }
  const Scheme* find(std::string_view id) const;
  std::size_t sentence_count() const;

 private:
  std::vector<Scheme> schemes_;
};

using SchemeFiles = std::vector<std::pair<std::string, std::filesystem::path>>;

/// `id=path` lines; blank lines and `#` comments are skipped. Relative paths
/// are resolved against `base_dir`.
SchemeFiles parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

SchemeCatalog load_catalog(const SchemeFiles& files);

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using Query = std::map<std::string, std::string, std::less<>>;

/// Request routing without any transport; `Server` forwards to this.
class Api {
 public:
  explicit Api(const SchemeCatalog& catalog) : catalog_(catalog) {}

  Response handle(std::string_view path, const Query& query) const;

 private:
  Response schemes() const;
  Response sentences(const Query& q) const;
  Response parse(const Query& q) const;
  Response diff(const Query& q) const;
  Response eval(const Query& q) const;

  const SchemeCatalog& catalog_;
};

/// HTTP front end. The catalog must outlive the server.
class Server {
 public:
  Server(const SchemeCatalog& catalog, std::optional<std::filesystem::path> static_dir = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Returns the bound port; 0 binds an ephemeral port. Throws on failure.
  int bind(const std::string& host, int port);
  /// Blocks until `stop` is called.
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits `host:port`; throws std::invalid_argument when malformed.
std::pair<std::string, int> parse_bind_address(std::string_view address);

}  // namespace wbtree::service

#endif  // WBTREE_SERVICE_HPP
