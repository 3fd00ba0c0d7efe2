#include <algorithm>
#include <cctype>
#include <exception>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "wigi/errors.hpp"
#include "wigi/pipeline.hpp"

namespace wigi::pipeline {

namespace {

std::string env_name(std::string flag) {
  std::string out = "WIGI_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
}

CLI::Option* flag(CLI::App* app, const std::string& name, bool& target, const std::string& help) {
  return app->add_flag("--" + name, target, help)->envname(env_name(name));
}

std::pair<std::string, std::string> split_pair(const std::string& text, const char* what) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw InputError(std::string(what) + " must be NAME=VALUE, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

void add_corpus_options(CLI::App* app, PipelineConfig& c) {
  opt(app, "lexicon", c.lexicon, "celebrity term lexicon ([wiki] sections)");
  opt(app, "cache", c.cache_dir, "article cache directory");
  opt(app, "celebrity-first", c.celebrity_years.first, "first birth year of the celebrity sample");
  opt(app, "celebrity-last", c.celebrity_years.last, "last birth year of the celebrity sample");
  opt(app, "window", c.celebrity_window, "characters of stripped text searched for terms");
}

}  // namespace

int run_cli(int argc, char** argv) {
  PipelineConfig c;
  std::vector<std::string> reports;
  std::vector<std::string> indices, overrides;
  std::string geography = "country";

  CLI::App app{"Wikidata biography gender-gap indicators", "wigi"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with option values");
  opt(&app, "threads", c.threads, "worker threads (output does not depend on it)")
      ->check(CLI::Range(1u, 256u));
  flag(&app, "strict", c.strict, "abort on the first malformed dump line");
  flag(&app, "offline", c.offline, "never touch the network");
  opt(&app, "out", c.out_dir, "output directory (created if absent)");
  opt(&app, "atlas-entities", c.atlas_entities, "entity -> cluster map (TSV)");
  opt(&app, "atlas-languages", c.atlas_languages, "wiki code -> cluster map (TSV)");
  opt(&app, "min-count", c.min_count, "minimum known-gender records per score");

  auto* extract = app.add_subcommand("extract", "dump -> records.csv and ingest statistics");
  extract->fallthrough();
  opt(extract, "dump", c.dump, "Wikidata JSON dump, one entity per line ('-' for stdin)")->required();
  opt(extract, "properties", c.properties, "property config file (key=value)");
  opt(extract, "property", overrides, "property override KEY=VALUE (repeatable)");

  auto* report = app.add_subcommand("report", "records.csv -> CSV reports");
  report->fallthrough();
  std::string which_help = "reports to run: all";
  for (const auto& r : kReports) which_help += ", " + r;
  report->add_option("which", reports, which_help)->required();
  opt(report, "records", c.records, "records file (default <out>/records.csv)");
  opt(report, "titles", c.titles, "sitelink titles file (default next to records)");
  opt(report, "index", indices, "external index NAME=PATH with columns country_qid,score (repeatable)");
  opt(report, "population", c.population, "world population table year,population");
  opt(report, "sizes", c.sizes, "article sizes table wiki,title,bytes");
  opt(report, "corpus", c.corpus, "article text directory <wiki>/<title>.txt");
  opt(report, "top-n-languages", c.top_n_languages, "wikis kept in the language report");
  opt(report, "top-n-sizes", c.top_n_sizes, "wikis kept in the article size report");
  opt(report, "grid-first", c.grid.first, "first calibration decade");
  opt(report, "grid-last", c.grid.last, "last calibration decade");
  opt(report, "grid-step", c.grid.step, "calibration step in years")->check(CLI::PositiveNumber);
  opt(report, "start-decade", c.start_decade, "start decade of the national scores");
  opt(report, "fit-first", c.fit_first, "first decade of the exponential fit");
  opt(report, "fit-last", c.fit_last, "last decade of the exponential fit");
  opt(report, "parity-target", c.parity_target, "female ratio solved for in the fit report");
  opt(report, "provisional-from", c.provisional_from, "decades from here on are marked provisional");
  opt(report, "geography", geography, "national score geography")
      ->check(CLI::IsMember({"country", "citizenship"}));
  add_corpus_options(report, c);

  auto* fetch = app.add_subcommand("fetch-articles", "download article text for the celebrity probe");
  fetch->fallthrough();
  opt(fetch, "records", c.records, "records file (default <out>/records.csv)");
  opt(fetch, "titles", c.titles, "sitelink titles file (default next to records)");
  opt(fetch, "user-agent", c.user_agent, "identifying User-Agent header");
  opt(fetch, "min-interval-ms", c.min_interval_ms, "minimum milliseconds between requests per host");
  flag(fetch, "allow-network", c.allow_network, "permit HTTP requests");
  add_corpus_options(fetch, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const auto& text : indices) c.indices.insert(split_pair(text, "--index"));
    for (const auto& text : overrides) c.property_overrides.push_back(split_pair(text, "--property"));
    c.geography = geography == "citizenship" ? indicators::ScoreGeography::Citizenship
                                             : indicators::ScoreGeography::Country;
    if (extract->parsed()) {
      cmd_extract(c, std::cerr);
    } else if (report->parsed()) {
      auto outcome = cmd_report(c, reports, std::cerr);
      std::cerr << "report: " << outcome.written.size() << " files written, " << outcome.skipped.size()
                << " reports skipped, " << outcome.warnings.size() << " warnings\n";
    } else if (fetch->parsed()) {
      cmd_fetch_articles(c, std::cerr);
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Utf8Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace wigi::pipeline
