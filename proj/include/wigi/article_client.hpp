#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "wigi/celebrity.hpp"
#include "wigi/errors.hpp"

namespace wigi::celebrity {

class FetchError : public Error {
 public:
  using Error::Error;
};

/// The wiki has no page with this title (HTTP 404).
class MissingPageError : public FetchError {
 public:
  using FetchError::FetchError;
};

/// Offline mode and the article is not in the cache.
class OfflineError : public FetchError {
 public:
  using FetchError::FetchError;
};

/// Non-retryable HTTP status, or retries exhausted.
class HttpError : public FetchError {
 public:
  HttpError(int status, const std::string& what) : FetchError(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

struct ClientConfig {
  std::string cache_dir;
  std::string user_agent;  // required for network access
  bool network_enabled = false;
  bool offline = false;
  std::chrono::milliseconds min_interval{1000};  // per host
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};  // doubled per retry
  /// When set (e.g. "http://127.0.0.1:8080"), used for every wiki instead of
  /// https://<lang>.wikipedia.org.
  std::string base_url_override;
};

/// Fetches raw wikitext through index.php?action=raw. Results are cached at
/// `<cache_dir>/<wiki>/<title_filename(title)>.txt`, the same layout
/// DirectoryCorpus reads, and written via a temporary file and rename.
class ArticleClient : public ArticleSource {
 public:
  explicit ArticleClient(ClientConfig config);

  /// Throws MissingPageError, OfflineError, HttpError or InputError
  /// (network disabled / missing user agent).
  std::string fetch(const std::string& wiki, const std::string& title);

  /// fetch() with MissingPageError mapped to nullopt.
  std::optional<std::string> text(const std::string& wiki, const std::string& title) override;

  std::size_t network_requests() const { return requests_; }
  std::size_t cache_hits() const { return cache_hits_; }

  /// "enwiki" -> "https://en.wikipedia.org", "zh_yuewiki" -> "https://zh-yue.wikipedia.org".
  static std::string base_url(const std::string& wiki);
  static std::string raw_path(const std::string& title);

 private:
  std::string cache_path(const std::string& wiki, const std::string& title) const;
  void wait_turn(const std::string& host);

  ClientConfig config_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> last_request_;
  std::size_t requests_ = 0;
  std::size_t cache_hits_ = 0;
};

}  // namespace wigi::celebrity
