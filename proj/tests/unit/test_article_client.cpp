#include <doctest.h>

#include <atomic>
#include <fstream>
#include <thread>

#include "synth.hpp"
#include "wigi/article_client.hpp"

#include <httplib.h>

using namespace wigi;
using namespace wigi::celebrity;

namespace {

/// Serves raw pages from a fixed table on a loopback port.
class FakeWiki {
 public:
  FakeWiki() {
    server_.Get("/w/index.php", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      last_agent = req.get_header_value("User-Agent");
      auto title = req.get_param_value("title");
      if (title == "Flaky" && flaky_left > 0) {
        --flaky_left;
        res.status = 503;
        return;
      }
      if (title == "Forbidden") {
        res.status = 403;
        return;
      }
      if (title == "Ada_Lovelace" || title == "Flaky") {
        res.set_content("'''" + title + "''' was a mathematician.", "text/plain");
        return;
      }
      res.status = 404;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeWiki() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> hits{0};
  std::atomic<int> flaky_left{0};
  std::string last_agent;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ClientConfig config_for(const FakeWiki& wiki, const std::string& cache) {
  ClientConfig c;
  c.cache_dir = cache;
  c.user_agent = "wigi-tests/1.0 (test@example.org)";
  c.network_enabled = true;
  c.min_interval = std::chrono::milliseconds(0);
  c.backoff_base = std::chrono::milliseconds(5);
  c.base_url_override = wiki.url();
  return c;
}

}  // namespace

TEST_CASE("base urls and raw paths") {
  CHECK(ArticleClient::base_url("enwiki") == "https://en.wikipedia.org");
  CHECK(ArticleClient::base_url("zh_yuewiki") == "https://zh-yue.wikipedia.org");
  CHECK_THROWS_AS(ArticleClient::base_url("wikidata"), InputError);
  CHECK(ArticleClient::raw_path("Ada Lovelace") == "/w/index.php?title=Ada_Lovelace&action=raw");
}

TEST_CASE("fetch, then serve from cache") {
  FakeWiki wiki;
  auto cache = testing::scratch_dir("client_cache");
  ArticleClient client(config_for(wiki, cache.string()));
  auto text = client.fetch("enwiki", "Ada Lovelace");
  CHECK(text == "'''Ada_Lovelace''' was a mathematician.");
  CHECK(wiki.last_agent == "wigi-tests/1.0 (test@example.org)");
  CHECK(std::filesystem::exists(cache / "enwiki" / "Ada_Lovelace.txt"));
  CHECK(client.fetch("enwiki", "Ada Lovelace") == text);
  CHECK(wiki.hits == 1);
  CHECK(client.cache_hits() == 1);
  CHECK(client.network_requests() == 1);

  auto offline_cfg = config_for(wiki, cache.string());
  offline_cfg.offline = true;
  ArticleClient offline(offline_cfg);
  CHECK(offline.fetch("enwiki", "Ada Lovelace") == text);
  CHECK_THROWS_AS(offline.fetch("enwiki", "Someone Else"), OfflineError);
}

TEST_CASE("missing pages and hard errors") {
  FakeWiki wiki;
  auto cache = testing::scratch_dir("client_missing");
  ArticleClient client(config_for(wiki, cache.string()));
  CHECK_THROWS_AS(client.fetch("enwiki", "Nobody"), MissingPageError);
  CHECK_FALSE(client.text("enwiki", "Nobody"));
  try {
    client.fetch("enwiki", "Forbidden");
    FAIL("expected HttpError");
  } catch (const HttpError& e) {
    CHECK(e.status() == 403);
  }
  CHECK(wiki.hits == 3);
}

TEST_CASE("server errors are retried with backoff") {
  FakeWiki wiki;
  auto cache = testing::scratch_dir("client_retry");
  ArticleClient client(config_for(wiki, cache.string()));
  wiki.flaky_left = 2;
  CHECK(client.fetch("enwiki", "Flaky").find("mathematician") != std::string::npos);
  CHECK(wiki.hits == 3);

  ArticleClient again(config_for(wiki, testing::scratch_dir("client_retry2").string()));
  wiki.hits = 0;
  wiki.flaky_left = 10;
  try {
    again.fetch("enwiki", "Flaky");
    FAIL("expected HttpError");
  } catch (const HttpError& e) {
    CHECK(e.status() == 503);
  }
  CHECK(wiki.hits == 4);
}

TEST_CASE("network access needs opting in and a user agent") {
  auto cache = testing::scratch_dir("client_off");
  ClientConfig c;
  c.cache_dir = cache.string();
  ArticleClient disabled(c);
  CHECK_THROWS_AS(disabled.fetch("enwiki", "Ada Lovelace"), InputError);
  c.network_enabled = true;
  ArticleClient anonymous(c);
  CHECK_THROWS_AS(anonymous.fetch("enwiki", "Ada Lovelace"), InputError);
  CHECK_THROWS_AS(ArticleClient(ClientConfig{}), InputError);
}
