#include "wigi/article_client.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#ifdef WIGI_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace wigi::celebrity {

namespace fs = std::filesystem;

namespace {

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == ':' || c == '(' ||
        c == ')' || c == ',') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

ArticleClient::ArticleClient(ClientConfig config) : config_(std::move(config)) {
  if (config_.cache_dir.empty()) throw InputError("article client needs a cache directory");
}

std::string ArticleClient::base_url(const std::string& wiki) {
  constexpr std::string_view suffix = "wiki";
  if (wiki.size() <= suffix.size() || wiki.compare(wiki.size() - 4, 4, suffix) != 0) {
    throw InputError("not a Wikipedia code: '" + wiki + "'");
  }
  std::string lang = wiki.substr(0, wiki.size() - 4);
  for (auto& c : lang) {
    if (c == '_') c = '-';
  }
  return "https://" + lang + ".wikipedia.org";
}

std::string ArticleClient::raw_path(const std::string& title) {
  std::string t = title;
  for (auto& c : t) {
    if (c == ' ') c = '_';
  }
  return "/w/index.php?title=" + url_encode(t) + "&action=raw";
}

std::string ArticleClient::cache_path(const std::string& wiki, const std::string& title) const {
  return config_.cache_dir + "/" + wiki + "/" + title_filename(title) + ".txt";
}

void ArticleClient::wait_turn(const std::string& host) {
  auto now = std::chrono::steady_clock::now();
  auto it = last_request_.find(host);
  if (it != last_request_.end()) {
    auto ready = it->second + config_.min_interval;
    if (ready > now) std::this_thread::sleep_for(ready - now);
  }
  last_request_[host] = std::chrono::steady_clock::now();
}

std::string ArticleClient::fetch(const std::string& wiki, const std::string& title) {
  const auto path = cache_path(wiki, title);
  std::lock_guard lock(mutex_);
  if (auto cached = read_file(path)) {
    ++cache_hits_;
    return *cached;
  }
  const std::string key = wiki + "/" + title;
  if (config_.offline) throw OfflineError("offline and not cached: " + key);
  if (!config_.network_enabled) throw InputError("network access disabled; cannot fetch " + key);
  if (config_.user_agent.empty()) throw InputError("a user agent is required for network access");

  const std::string host = config_.base_url_override.empty() ? base_url(wiki) : config_.base_url_override;
  httplib::Client client(host);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  client.set_follow_location(true);
  const httplib::Headers headers{{"User-Agent", config_.user_agent}};

  std::string last_problem;
  int last_status = 0;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 1)));
    wait_turn(host);
    ++requests_;
    auto res = client.Get(raw_path(title), headers);
    if (!res) {
      last_problem = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status == 200) {
      fs::create_directories(fs::path(path).parent_path());
      const auto tmp = path + ".tmp";
      {
        std::ofstream out(tmp, std::ios::binary);
        out << res->body;
        if (!out) throw FetchError("cannot write cache file " + tmp);
      }
      fs::rename(tmp, path);
      return res->body;
    }
    if (res->status == 404) throw MissingPageError("no such page: " + key);
    last_problem = "HTTP " + std::to_string(res->status);
    if (!retryable(res->status)) break;
  }
  throw HttpError(last_status, "fetching " + key + " failed: " + last_problem);
}

std::optional<std::string> ArticleClient::text(const std::string& wiki, const std::string& title) {
  try {
    return fetch(wiki, title);
  } catch (const MissingPageError&) {
    return std::nullopt;
  }
}

}  // namespace wigi::celebrity
