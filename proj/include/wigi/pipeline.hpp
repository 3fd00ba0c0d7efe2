#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wigi/celebrity.hpp"
#include "wigi/indicators.hpp"

namespace wigi::pipeline {

/// Every knob of the command-line tool. Paths left empty fall back to the
/// documented defaults (bundled data files, files inside `out_dir`).
struct PipelineConfig {
  std::string dump;  // "-" reads standard input
  std::string records;
  std::string titles;
  std::string properties;
  std::vector<std::pair<std::string, std::string>> property_overrides;  // applied last
  std::string atlas_entities;
  std::string atlas_languages;
  std::map<std::string, std::string> indices;  // index name -> CSV path
  std::string population;
  std::string sizes;
  std::string lexicon;
  std::string corpus;
  std::string cache_dir;
  std::string user_agent;
  std::string out_dir = ".";

  std::uint64_t min_count = 10;
  std::size_t top_n_languages = 50;
  std::size_t top_n_sizes = 25;
  indicators::DecadeGrid grid;
  std::int64_t start_decade = 1900;
  std::int64_t fit_first = 1800;
  std::int64_t fit_last = 1980;
  double parity_target = 0.5;
  std::int64_t provisional_from = 1990;
  celebrity::YearRange celebrity_years;
  std::size_t celebrity_window = 200;
  indicators::ScoreGeography geography = indicators::ScoreGeography::Country;

  bool strict = false;
  bool offline = false;
  bool allow_network = false;
  unsigned threads = 1;
  std::int64_t min_interval_ms = 1000;
};

inline const std::vector<std::string> kReports = {
    "tallies", "series",     "wigi",  "compare",   "fit",      "culture",
    "language", "uniqueness", "sizes", "celebrity",
};

/// Directory holding the bundled atlas, lexicon and population files.
std::string data_dir();

struct ExtractSummary {
  std::uint64_t humans = 0;
  std::uint64_t places = 0;
  std::uint64_t malformed = 0;
};

/// Dump -> records.csv, sitelink_titles.csv, ingest_stats.jsonl and a run
/// manifest inside out_dir.
ExtractSummary cmd_extract(const PipelineConfig& config, std::ostream& log);

struct ReportOutcome {
  std::vector<std::string> written;   // file names inside out_dir
  std::vector<std::string> skipped;   // reports skipped under "all"
  std::vector<std::string> warnings;
};

/// Runs the named reports ("all" expands to every report whose inputs are
/// available). Under an explicit selection a missing input throws InputError.
ReportOutcome cmd_report(const PipelineConfig& config, const std::vector<std::string>& which,
                         std::ostream& log);

struct FetchSummary {
  std::uint64_t fetched = 0;
  std::uint64_t cached = 0;
  std::uint64_t missing = 0;
};

/// Downloads article text for every record the celebrity probe would read.
FetchSummary cmd_fetch_articles(const PipelineConfig& config, std::ostream& log);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

/// Command-line entry point. Exit codes: 0 ok, 1 input error, 2 dump parse
/// abort, 3 internal error.
int run_cli(int argc, char** argv);

}  // namespace wigi::pipeline
