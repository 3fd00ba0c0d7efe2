#include "wigi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "wigi/article_client.hpp"
#include "wigi/csv.hpp"
#include "wigi/culture.hpp"
#include "wigi/errors.hpp"
#include "wigi/exp_fit.hpp"
#include "wigi/ingest.hpp"
#include "wigi/records_io.hpp"
#include "wigi/stats.hpp"

#ifndef WIGI_DATA_DIR
#define WIGI_DATA_DIR "data"
#endif

namespace wigi::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using indicators::GenderTally;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string ratio4(double v) { return fmt::format("{:.4f}", v); }
std::string real(double v) { return std::isfinite(v) ? fmt::format("{:.10g}", v) : ""; }
std::string pval(double v) { return std::isfinite(v) ? fmt::format("{:.6g}", v) : ""; }

std::string ratio_or_blank(const GenderTally& t, indicators::GenderSet set) {
  return t.known_total() ? ratio4(indicators::gender_ratio(t, set)) : "";
}

std::string or_default(const std::string& value, const std::string& fallback) {
  return value.empty() ? fallback : value;
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw InputError(what + " not configured");
  if (!fs::is_regular_file(path)) throw InputError(what + " not found: " + path);
}

class CsvFile {
 public:
  CsvFile(const PipelineConfig& config, const std::string& name, ReportOutcome* outcome = nullptr)
      : out_(fs::path(config.out_dir) / name, std::ios::binary) {
    if (!out_) throw InputError("cannot write " + (fs::path(config.out_dir) / name).string());
    if (outcome) outcome->written.push_back(name);
  }
  CsvFile& row(const std::vector<std::string>& fields) {
    csv::write_row(out_, fields);
    return *this;
  }

 private:
  std::ofstream out_;
};

std::string outcome_key(culture::ConsensusOutcome o) { return std::string(culture::to_string(o)); }

culture::Atlas load_atlas(const PipelineConfig& c) {
  auto entities = or_default(c.atlas_entities, data_dir() + "/culture_entities.tsv");
  auto languages = or_default(c.atlas_languages, data_dir() + "/culture_languages.tsv");
  require_file(entities, "culture entity map");
  require_file(languages, "culture language map");
  return culture::Atlas::load(entities, languages);
}

PropertyConfig load_properties(const PipelineConfig& c) {
  PropertyConfig props = c.properties.empty() ? PropertyConfig{} : PropertyConfig::load(c.properties);
  props.apply_environment();
  for (const auto& [key, value] : c.property_overrides) props.set(key, value);
  return props;
}

/// Table-1 style coverage rows: (property, items with it).
std::vector<std::pair<std::string, std::uint64_t>> coverage(std::span<const HumanRecord> records,
                                                             const culture::Atlas& atlas) {
  std::uint64_t ethnic = 0, country = 0, pob = 0, death = 0, citizen = 0, cult = 0, birth = 0,
                gender = 0, sitelink = 0;
  for (const auto& r : records) {
    ethnic += !r.ethnic_groups.empty();
    country += r.country.has_value();
    pob += r.place_of_birth.has_value();
    death += r.death.has_value();
    citizen += !r.citizenships.empty();
    cult += culture::consensus_culture(r, atlas).cluster != culture::Cluster::Unassigned;
    birth += r.birth.has_value();
    gender += r.gender.is_known();
    sitelink += !r.sitelinks.empty();
  }
  return {{"ethnic group", ethnic},   {"country", country},        {"place of birth", pob},
          {"date of death", death},   {"citizenship", citizen},    {"culture", cult},
          {"date of birth", birth},   {"gender", gender},          {"at least one site link", sitelink},
          {"qid", records.size()}};
}

double percent(std::uint64_t part, std::uint64_t whole) {
  return whole ? 100.0 * static_cast<double>(part) / static_cast<double>(whole) : 0.0;
}

json manifest_base(const PipelineConfig& c, const std::string& command) {
  json m;
  m["tool"] = "wigi";
  m["version"] = kVersion;
  m["command"] = command;
  m["thresholds"] = {
      {"min_count", c.min_count},
      {"top_n_languages", c.top_n_languages},
      {"top_n_sizes", c.top_n_sizes},
      {"calibration_grid", {c.grid.first, c.grid.last, c.grid.step}},
      {"start_decade", c.start_decade},
      {"fit_range", {c.fit_first, c.fit_last}},
      {"parity_target", c.parity_target},
      {"provisional_from", c.provisional_from},
      {"celebrity_years", {c.celebrity_years.first, c.celebrity_years.last}},
      {"celebrity_window", c.celebrity_window},
      {"geography", c.geography == indicators::ScoreGeography::Country ? "country" : "citizenship"},
      {"strict", c.strict},
  };
  return m;
}

void add_input(json& m, const std::string& role, const std::string& path) {
  if (path.empty() || path == "-" || !fs::is_regular_file(path)) return;
  m["inputs"][role] = {{"file", fs::path(path).filename().string()}, {"fnv1a64", file_digest(path)}};
}

void write_manifest(const PipelineConfig& c, const std::string& name, const json& m) {
  std::ofstream out(fs::path(c.out_dir) / name, std::ios::binary);
  out << m.dump(2) << '\n';
}

/// Collects dump output in memory until the place index is complete.
class CollectingSink : public ingest::RecordSink {
 public:
  void on_human(HumanRecord&& record, std::vector<SitelinkTitle>&& titles) override {
    humans.push_back(std::move(record));
    for (auto& t : titles) this->titles.push_back(std::move(t));
  }
  void on_place(PlaceRecord&& place) override {
    auto id = place.id;
    places.insert_or_assign(id, std::move(place));
  }

  std::vector<HumanRecord> humans;
  std::vector<SitelinkTitle> titles;
  ingest::PlaceIndex places;
};

// ----------------------------------------------------------------- reports

struct ReportContext {
  const PipelineConfig& config;
  ReportOutcome& outcome;
  std::ostream& log;
  std::vector<HumanRecord> records;
  std::string titles_path;
  std::optional<std::vector<SitelinkTitle>> titles;
  std::optional<culture::Atlas> atlas;

  const culture::Atlas& get_atlas() {
    if (!atlas) atlas = load_atlas(config);
    return *atlas;
  }
  const std::vector<SitelinkTitle>& get_titles() {
    if (!titles) {
      require_file(titles_path, "sitelink titles file");
      titles = records::read_titles(titles_path);
    }
    return *titles;
  }
  void warn(std::string message) {
    log << "warning: " << message << '\n';
    outcome.warnings.push_back(std::move(message));
  }
};

void series_rows(CsvFile& file, const indicators::RatioSeries& series, std::int64_t provisional_from,
                 const std::string& prefix_value = {}) {
  for (const auto& [bucket, t] : series.points) {
    std::vector<std::string> row;
    if (!prefix_value.empty()) row.push_back(prefix_value);
    row.insert(row.end(),
               {std::to_string(bucket), std::to_string(t.total()), std::to_string(t.known_total()),
                std::to_string(t.count(GenderKind::Female)), std::to_string(t.count(GenderKind::Male)),
                std::to_string(t.nonbinary_total()), ratio_or_blank(t, indicators::kFemale),
                ratio_or_blank(t, indicators::kMale), ratio_or_blank(t, indicators::kNonbinary),
                bucket >= provisional_from ? "1" : "0"});
    file.row(row);
  }
}

const std::vector<std::string> kSeriesColumns = {
    "total", "known", "female", "male", "nonbinary", "female_ratio", "male_ratio", "nonbinary_ratio",
    "provisional"};

void report_tallies(ReportContext& ctx) {
  auto tally = indicators::tally_all(ctx.records, ctx.config.threads);
  CsvFile file(ctx.config, "tallies.csv", &ctx.outcome);
  file.row({"gender", "count", "percent_of_total", "percent_of_known"});
  for (std::size_t i = 0; i < kGenderKindCount; ++i) {
    auto kind = static_cast<GenderKind>(i);
    auto n = tally.count(kind);
    file.row({std::string(gender_kind_name(kind)), std::to_string(n), ratio4(percent(n, tally.total())),
              kind == GenderKind::Unknown ? "" : ratio4(percent(n, tally.known_total()))});
  }
  file.row({"nonbinary_all", std::to_string(tally.nonbinary_total()),
            ratio4(percent(tally.nonbinary_total(), tally.total())),
            ratio4(percent(tally.nonbinary_total(), tally.known_total()))});

  CsvFile cov(ctx.config, "coverage.csv", &ctx.outcome);
  cov.row({"property", "percent_of_total", "items"});
  for (const auto& [name, n] : coverage(ctx.records, ctx.get_atlas())) {
    cov.row({name, fmt::format("{:.2f}", percent(n, ctx.records.size())), std::to_string(n)});
  }
}

void report_series(ReportContext& ctx) {
  const auto& c = ctx.config;
  for (auto anchor : {indicators::DateAnchor::Birth, indicators::DateAnchor::Death}) {
    auto series = indicators::build_series(ctx.records, anchor, indicators::BucketWidth::Decade, {},
                                           c.threads);
    CsvFile file(c, anchor == indicators::DateAnchor::Birth ? "series_birth.csv" : "series_death.csv",
                 &ctx.outcome);
    std::vector<std::string> header{"decade"};
    header.insert(header.end(), kSeriesColumns.begin(), kSeriesColumns.end());
    file.row(header);
    series_rows(file, series, c.provisional_from);
  }

  const auto& atlas = ctx.get_atlas();
  std::map<EntityId, culture::Cluster> cluster_of;
  for (const auto& r : ctx.records) {
    auto cons = culture::consensus_culture(r, atlas);
    if (cons.cluster != culture::Cluster::Unassigned) cluster_of[r.id] = cons.cluster;
  }
  CsvFile file(c, "culture_series.csv", &ctx.outcome);
  std::vector<std::string> header{"cluster", "decade"};
  header.insert(header.end(), kSeriesColumns.begin(), kSeriesColumns.end());
  file.row(header);
  for (auto cluster : culture::kWorldCultures) {
    auto series = indicators::build_series(
        ctx.records, indicators::DateAnchor::Birth, indicators::BucketWidth::Decade,
        [&](const HumanRecord& r) {
          auto it = cluster_of.find(r.id);
          return it != cluster_of.end() && it->second == cluster;
        },
        c.threads);
    series_rows(file, series, c.provisional_from, std::string(culture::to_string(cluster)));
  }

  auto population_path = or_default(c.population, data_dir() + "/world_population.csv");
  if (!fs::is_regular_file(population_path)) {
    ctx.warn("population table not found, population correlation skipped");
    return;
  }
  auto population = indicators::read_population(population_path);
  auto by_century = indicators::build_series(ctx.records, indicators::DateAnchor::Birth,
                                             indicators::BucketWidth::Century, {}, c.threads);
  try {
    auto r = indicators::population_correlation(by_century, population);
    CsvFile pop(c, "population_correlation.csv", &ctx.outcome);
    pop.row({"bucket_width", "buckets", "pearson_r", "p_value"});
    pop.row({"century", std::to_string(r.n), real(r.coefficient), pval(r.p_value)});
  } catch (const DomainError& e) {
    ctx.warn(std::string("population correlation skipped: ") + e.what());
  }
}

void report_wigi(ReportContext& ctx) {
  const auto& c = ctx.config;
  auto scores = indicators::national_scores(ctx.records, c.start_decade, c.min_count, c.geography);
  CsvFile file(c, "wigi_scores.csv", &ctx.outcome);
  file.row({"rank", "country_qid", "female_ratio", "n", "start_decade"});
  std::size_t rank = 0;
  for (const auto& s : scores) {
    file.row({std::to_string(++rank), s.country.str(), ratio4(s.female_ratio), std::to_string(s.n),
              std::to_string(s.start_decade)});
  }
}

/// 1-based ranks by descending score, ties broken by country id.
std::map<EntityId, std::size_t> descending_ranks(std::vector<std::pair<EntityId, double>> items) {
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::map<EntityId, std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i) out[items[i].first] = i + 1;
  return out;
}

void report_compare(ReportContext& ctx) {
  const auto& c = ctx.config;
  if (c.indices.empty()) throw InputError("compare needs at least one --index NAME=PATH");
  CsvFile summary(c, "compare_summary.csv", &ctx.outcome);
  summary.row({"index", "start_decade", "spearman_rho", "p_value", "shared_countries"});
  for (const auto& [name, path] : c.indices) {
    require_file(path, "external index " + name);
    auto external = indicators::read_external_index(path);
    auto cal = indicators::calibrate_start_decade(ctx.records, external, c.grid, c.min_count,
                                                  c.geography);
    summary.row({name, std::to_string(cal.decade), real(cal.rho), pval(cal.p_value),
                 std::to_string(cal.shared)});

    CsvFile grid(c, "compare_" + name + ".csv", &ctx.outcome);
    grid.row({"decade", "shared_countries", "spearman_rho", "p_value", "selected"});
    for (const auto& p : cal.grid) {
      grid.row({std::to_string(p.decade), std::to_string(p.shared),
                p.correlation ? real(p.correlation->coefficient) : "",
                p.correlation ? pval(p.correlation->p_value) : "", p.decade == cal.decade ? "1" : "0"});
    }

    // abs_rank_difference = |external_rank - wigi_rank|, ranks taken within
    // the joined country set, both descending by score.
    auto joined = indicators::join_scores(
        indicators::national_scores(ctx.records, cal.decade, c.min_count, c.geography), external);
    std::vector<std::pair<EntityId, double>> w, e;
    for (const auto& j : joined) {
      w.emplace_back(j.country, j.wigi_score);
      e.emplace_back(j.country, j.external_score);
    }
    auto wr = descending_ranks(w);
    auto er = descending_ranks(e);
    CsvFile ranks(c, "compare_" + name + "_ranks.csv", &ctx.outcome);
    ranks.row({"country_qid", "external_rank", "wigi_rank", "external_score", "wigi_score",
               "abs_rank_difference"});
    for (const auto& j : joined) {
      auto a = er[j.country], b = wr[j.country];
      ranks.row({j.country.str(), std::to_string(a), std::to_string(b), real(j.external_score),
                 ratio4(j.wigi_score), std::to_string(a > b ? a - b : b - a)});
    }
  }
}

void report_fit(ReportContext& ctx) {
  const auto& c = ctx.config;
  auto series = indicators::build_series(ctx.records, indicators::DateAnchor::Birth,
                                         indicators::BucketWidth::Decade, {}, c.threads);
  std::vector<double> years, ratios;
  for (const auto& [decade, t] : series.points) {
    if (decade < c.fit_first || decade > c.fit_last) continue;
    if (t.known_total() < std::max<std::uint64_t>(1, c.min_count)) continue;
    years.push_back(static_cast<double>(decade));
    ratios.push_back(indicators::gender_ratio(t, indicators::kFemale));
  }
  auto fit = stats::fit_exponential(years, ratios);
  std::string parity;
  try {
    parity = real(stats::solve_parity_year(fit.params, c.parity_target));
  } catch (const DomainError& e) {
    ctx.warn(std::string("parity year: ") + e.what());
  }
  CsvFile file(c, "fit.csv", &ctx.outcome);
  file.row({"a", "b", "c", "d", "rss", "initial_rss", "iterations", "converged", "in_unit_range",
            "degenerate", "points", "first_decade", "last_decade", "parity_target", "parity_year"});
  file.row({real(fit.params.a), real(fit.params.b), real(fit.params.c), real(fit.params.d), real(fit.rss),
            real(fit.initial_rss), std::to_string(fit.iterations), fit.converged ? "1" : "0",
            fit.in_unit_range ? "1" : "0", fit.degenerate ? "1" : "0", std::to_string(years.size()),
            fmt::format("{}", years.front()), fmt::format("{}", years.back()), real(c.parity_target),
            parity});
  CsvFile pts(c, "fit_points.csv", &ctx.outcome);
  pts.row({"decade", "observed_female_ratio", "predicted_female_ratio"});
  for (std::size_t i = 0; i < years.size(); ++i) {
    pts.row({fmt::format("{}", years[i]), ratio4(ratios[i]), ratio4(fit.predict(years[i]))});
  }
}

void report_culture(ReportContext& ctx) {
  const auto& c = ctx.config;
  auto breakdown = indicators::culture_breakdown(ctx.records, ctx.get_atlas());
  CsvFile file(c, "culture_gender.csv", &ctx.outcome);
  file.row({"cluster", "total", "known", "female", "male", "nonbinary", "female_ratio",
            "nonbinary_ratio"});
  std::vector<culture::Cluster> order(culture::kWorldCultures.begin(), culture::kWorldCultures.end());
  order.push_back(culture::Cluster::Unassigned);
  for (auto cluster : order) {
    GenderTally t;
    if (auto it = breakdown.clusters.find(cluster); it != breakdown.clusters.end()) t = it->second;
    file.row({std::string(culture::to_string(cluster)), std::to_string(t.total()),
              std::to_string(t.known_total()), std::to_string(t.count(GenderKind::Female)),
              std::to_string(t.count(GenderKind::Male)), std::to_string(t.nonbinary_total()),
              ratio_or_blank(t, indicators::kFemale), ratio_or_blank(t, indicators::kNonbinary)});
  }

  CsvFile cons(c, "culture_consensus.csv", &ctx.outcome);
  cons.row({"outcome", "count"});
  for (auto o : {culture::ConsensusOutcome::Unanimous, culture::ConsensusOutcome::Majority,
                 culture::ConsensusOutcome::Conflicted, culture::ConsensusOutcome::NoData}) {
    auto it = breakdown.outcomes.find(o);
    cons.row({outcome_key(o), std::to_string(it == breakdown.outcomes.end() ? 0 : it->second)});
  }

  // gender (male / female / nonbinary) by world culture, empty rows and
  // columns dropped
  std::vector<std::vector<double>> table;
  for (auto cluster : culture::kWorldCultures) {
    auto it = breakdown.clusters.find(cluster);
    if (it == breakdown.clusters.end() || it->second.known_total() == 0) continue;
    const auto& t = it->second;
    table.push_back({static_cast<double>(t.count(GenderKind::Male)),
                     static_cast<double>(t.count(GenderKind::Female)),
                     static_cast<double>(t.nonbinary_total())});
  }
  for (int col = 2; col >= 0; --col) {
    bool empty = std::all_of(table.begin(), table.end(), [&](const auto& r) { return r[col] == 0.0; });
    if (empty) {
      for (auto& r : table) r.erase(r.begin() + col);
    }
  }
  try {
    auto chi = stats::chi_squared(table);
    CsvFile f(c, "culture_chisq.csv", &ctx.outcome);
    f.row({"statistic", "df", "p_value", "rows", "columns"});
    f.row({real(chi.statistic), std::to_string(chi.df), pval(chi.p_value), std::to_string(table.size()),
           std::to_string(table.empty() ? 0 : table.front().size())});
  } catch (const DomainError& e) {
    ctx.warn(std::string("chi-squared test skipped: ") + e.what());
  }
}

void report_language(ReportContext& ctx) {
  const auto& c = ctx.config;
  auto lang = indicators::by_language(ctx.records, c.top_n_languages, c.threads);
  for (auto& w : lang.warnings) ctx.warn(w);
  CsvFile file(c, "language.csv", &ctx.outcome);
  file.row({"wiki", "total", "known", "female_ratio", "nonbinary_ratio"});
  for (const auto& r : lang.rows) {
    file.row({r.wiki, std::to_string(r.total), std::to_string(r.known), ratio4(r.female_ratio),
              ratio4(r.nonbinary_ratio)});
  }

  auto agg = indicators::sitelink_culture_aggregate(ctx.records, ctx.get_atlas());
  CsvFile cf(c, "language_culture.csv", &ctx.outcome);
  cf.row({"cluster", "total", "known", "female_ratio", "nonbinary_ratio"});
  auto emit = [&](culture::Cluster cluster, const GenderTally& t) {
    cf.row({std::string(culture::to_string(cluster)), std::to_string(t.total()),
            std::to_string(t.known_total()), ratio_or_blank(t, indicators::kFemale),
            ratio_or_blank(t, indicators::kNonbinary)});
  };
  for (const auto& [cluster, t] : agg.clusters) emit(cluster, t);
  emit(culture::Cluster::Unassigned, agg.unassigned);
}

void report_uniqueness(ReportContext& ctx) {
  auto report = indicators::uniqueness_deltas(ctx.records);
  for (auto& w : report.warnings) ctx.warn(w);
  CsvFile file(ctx.config, "uniqueness.csv", &ctx.outcome);
  file.row({"wiki", "unique_female_ratio", "many_female_ratio", "delta", "unique_count", "many_count"});
  for (const auto& d : report.rows) {
    file.row({d.wiki, ratio4(d.unique_female_ratio), ratio4(d.many_female_ratio), ratio4(d.delta),
              std::to_string(d.unique_count), std::to_string(d.many_count)});
  }
}

void report_sizes(ReportContext& ctx) {
  const auto& c = ctx.config;
  require_file(c.sizes, "article sizes table");
  auto sizes = indicators::read_sizes(c.sizes);
  auto report = indicators::article_size_stats(ctx.records, ctx.get_titles(), sizes, c.top_n_sizes,
                                               c.min_count);
  for (auto& w : report.warnings) ctx.warn(w);
  if (report.unjoined_rows) ctx.warn(fmt::format("{} size rows did not join to a record", report.unjoined_rows));
  CsvFile file(c, "sizes.csv", &ctx.outcome);
  file.row({"wiki", "n_male", "n_female", "mean_bytes_male", "mean_bytes_female"});
  for (const auto& s : report.rows) {
    file.row({s.wiki, std::to_string(s.n_male), std::to_string(s.n_female), real(s.mean_bytes_male),
              real(s.mean_bytes_female)});
  }
  CsvFile fit(c, "sizes_fit.csv", &ctx.outcome);
  fit.row({"slope", "intercept", "r_squared", "n", "constant_response", "unjoined_rows"});
  fit.row({real(report.fit.slope), real(report.fit.intercept), real(report.fit.r_squared),
           std::to_string(report.fit.n), report.fit.constant_response ? "1" : "0",
           std::to_string(report.unjoined_rows)});
}

celebrity::Lexicon load_lexicon(const PipelineConfig& c) {
  auto path = or_default(c.lexicon, data_dir() + "/celebrity_terms.txt");
  require_file(path, "celebrity lexicon");
  auto lex = celebrity::Lexicon::load(path);
  lex.window = c.celebrity_window;
  return lex;
}

void report_celebrity(ReportContext& ctx) {
  const auto& c = ctx.config;
  auto corpus_dir = or_default(c.corpus, c.cache_dir);
  if (corpus_dir.empty() || !fs::is_directory(corpus_dir)) {
    throw InputError("celebrity report needs an article corpus directory (--corpus)");
  }
  auto lexicon = load_lexicon(c);
  celebrity::DirectoryCorpus corpus(corpus_dir);
  auto obs = celebrity::build_observations(ctx.records, ctx.get_titles(), corpus, lexicon,
                                           c.celebrity_years);
  if (obs.missing_text) ctx.warn(fmt::format("{} articles missing from the corpus", obs.missing_text));
  if (obs.missing_title) ctx.warn(fmt::format("{} sitelinks without a title", obs.missing_title));

  CsvFile rows(c, "celebrity_observations.csv", &ctx.outcome);
  rows.row({"qid", "wiki", "gender", "birth_decade", "is_celebrity"});
  std::map<std::tuple<std::string, std::string, std::int64_t>, std::pair<std::uint64_t, std::uint64_t>> cells;
  for (const auto& o : obs.observations) {
    rows.row({o.id.str(), o.wiki, to_string(o.gender), std::to_string(o.birth_decade),
              o.is_celebrity ? "1" : "0"});
    auto& cell = cells[{to_string(o.gender), o.wiki, o.birth_decade}];
    ++cell.first;
    cell.second += o.is_celebrity;
  }
  CsvFile heat(c, "celebrity_heatmap.csv", &ctx.outcome);
  heat.row({"gender", "wiki", "decade", "n", "celebrities", "percent"});
  for (const auto& [key, cell] : cells) {
    const auto& [gender, wiki, decade] = key;
    heat.row({gender, wiki, std::to_string(decade), std::to_string(cell.first),
              std::to_string(cell.second), ratio4(percent(cell.second, cell.first))});
  }

  auto fit = celebrity::celebrity_regression(obs.observations);
  if (fit.separation_flag) ctx.warn("celebrity regression: separation detected");
  CsvFile reg(c, "celebrity_regression.csv", &ctx.outcome);
  reg.row({"term", "coef", "std_err", "z", "p_value"});
  for (std::size_t j = 0; j < fit.names.size(); ++j) {
    auto k = static_cast<Eigen::Index>(j);
    reg.row({fit.names[j], real(fit.coefficients(k)), real(fit.standard_errors(k)), real(fit.z_scores(k)),
             pval(fit.p_values(k))});
  }
  CsvFile sum(c, "celebrity_regression_summary.csv", &ctx.outcome);
  sum.row({"observations", "log_likelihood", "null_log_likelihood", "iterations", "converged",
           "separation"});
  sum.row({std::to_string(obs.observations.size()), real(fit.log_likelihood), real(fit.null_log_likelihood),
           std::to_string(fit.iterations), fit.converged ? "1" : "0", fit.separation_flag ? "1" : "0"});
}

/// Reason a report cannot run under "all", or empty when it can.
std::string missing_input(const std::string& name, const PipelineConfig& c, const std::string& titles) {
  if (name == "compare" && c.indices.empty()) return "no external index given";
  if (name == "sizes") {
    if (c.sizes.empty()) return "no sizes table given";
    if (!fs::is_regular_file(titles)) return "no sitelink titles file";
  }
  if (name == "celebrity") {
    if (c.corpus.empty() && c.cache_dir.empty()) return "no article corpus given";
    if (!fs::is_regular_file(titles)) return "no sitelink titles file";
  }
  return {};
}

}  // namespace

std::string data_dir() {
  if (const char* env = std::getenv("WIGI_DATA_DIR")) return env;
  return WIGI_DATA_DIR;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return fmt::format("{:016x}", h);
}

ExtractSummary cmd_extract(const PipelineConfig& c, std::ostream& log) {
  if (c.dump.empty()) throw InputError("no dump given (--dump)");
  std::ifstream file;
  std::istream* dump = &std::cin;
  if (c.dump != "-") {
    file.open(c.dump, std::ios::binary);
    if (!file) throw InputError("cannot open dump: " + c.dump);
    dump = &file;
  }
  auto props = load_properties(c);
  auto atlas = load_atlas(c);
  fs::create_directories(c.out_dir);

  CollectingSink sink;
  ingest::StreamOptions opts;
  opts.strict = c.strict;
  opts.threads = c.threads;
  auto stats = ingest::stream_entities(*dump, props, sink, opts);

  std::uint64_t resolved = 0, unresolved = 0;
  std::map<culture::ConsensusOutcome, std::uint64_t> outcomes;
  for (auto& h : sink.humans) {
    h.country = ingest::resolve_country(h, sink.places);
    if (h.place_of_birth) (h.country ? resolved : unresolved) += 1;
    ++outcomes[culture::consensus_culture(h, atlas).outcome];
  }
  auto cov = coverage(sink.humans, atlas);
  const auto humans = sink.humans.size();

  records::write_records(std::move(sink.humans), (fs::path(c.out_dir) / "records.csv").string());
  records::write_titles(std::move(sink.titles), (fs::path(c.out_dir) / "sitelink_titles.csv").string());

  std::ofstream jl(fs::path(c.out_dir) / "ingest_stats.jsonl", std::ios::binary);
  jl << json{{"event", "ingest"},
             {"entities_seen", stats.entities_seen},
             {"humans", stats.humans},
             {"places", stats.places},
             {"skipped", stats.skipped},
             {"malformed", stats.malformed},
             {"gender_conflicts", stats.gender_conflicts},
             {"coarse_dates", stats.coarse_dates}}
            .dump()
     << '\n';
  for (auto line : stats.malformed_lines) jl << json{{"event", "malformed"}, {"line", line}}.dump() << '\n';
  jl << json{{"event", "resolution"}, {"country_resolved", resolved}, {"country_unresolved", unresolved}}.dump()
     << '\n';
  for (const auto& [o, n] : outcomes) {
    jl << json{{"event", "consensus"}, {"outcome", outcome_key(o)}, {"count", n}}.dump() << '\n';
  }
  for (const auto& [name, n] : cov) {
    jl << json{{"event", "coverage"},
               {"property", name},
               {"items", n},
               {"percent", fmt::format("{:.2f}", percent(n, humans))}}
              .dump()
       << '\n';
  }

  auto m = manifest_base(c, "extract");
  add_input(m, "dump", c.dump);
  add_input(m, "properties", c.properties);
  add_input(m, "atlas_entities", or_default(c.atlas_entities, data_dir() + "/culture_entities.tsv"));
  add_input(m, "atlas_languages", or_default(c.atlas_languages, data_dir() + "/culture_languages.tsv"));
  m["property_config"] = props.to_map();
  m["outputs"] = {"records.csv", "sitelink_titles.csv", "ingest_stats.jsonl"};
  m["malformed_entities"] = stats.malformed;
  write_manifest(c, "manifest_extract.json", m);

  log << fmt::format("extract: {} entities, {} humans, {} places, {} skipped, {} malformed\n",
                     stats.entities_seen, stats.humans, stats.places, stats.skipped, stats.malformed);
  return {stats.humans, stats.places, stats.malformed};
}

ReportOutcome cmd_report(const PipelineConfig& c, const std::vector<std::string>& which,
                         std::ostream& log) {
  std::vector<std::string> selected;
  bool all = false;
  for (const auto& w : which) {
    if (w == "all") {
      all = true;
      continue;
    }
    if (std::find(kReports.begin(), kReports.end(), w) == kReports.end()) {
      throw InputError("unknown report '" + w + "'");
    }
    selected.push_back(w);
  }
  if (all) selected = kReports;
  if (selected.empty()) throw InputError("no report selected");

  auto records_path = or_default(c.records, (fs::path(c.out_dir) / "records.csv").string());
  require_file(records_path, "records file");
  auto titles_path =
      or_default(c.titles, (fs::path(records_path).parent_path() / "sitelink_titles.csv").string());
  fs::create_directories(c.out_dir);

  ReportOutcome outcome;
  ReportContext ctx{c, outcome, log, records::read_records(records_path), titles_path, {}, {}};

  const std::map<std::string, void (*)(ReportContext&)> runners = {
      {"tallies", report_tallies},   {"series", report_series},         {"wigi", report_wigi},
      {"compare", report_compare},   {"fit", report_fit},               {"culture", report_culture},
      {"language", report_language}, {"uniqueness", report_uniqueness}, {"sizes", report_sizes},
      {"celebrity", report_celebrity},
  };
  for (const auto& name : selected) {
    if (all) {
      if (auto why = missing_input(name, c, titles_path); !why.empty()) {
        outcome.skipped.push_back(name);
        ctx.warn("report " + name + " skipped: " + why);
        continue;
      }
      try {
        runners.at(name)(ctx);
      } catch (const DomainError& e) {
        outcome.skipped.push_back(name);
        ctx.warn("report " + name + " skipped: " + e.what());
      }
    } else {
      runners.at(name)(ctx);
    }
  }

  auto m = manifest_base(c, "report");
  add_input(m, "records", records_path);
  add_input(m, "titles", titles_path);
  add_input(m, "population", or_default(c.population, data_dir() + "/world_population.csv"));
  add_input(m, "sizes", c.sizes);
  add_input(m, "lexicon", or_default(c.lexicon, data_dir() + "/celebrity_terms.txt"));
  add_input(m, "atlas_entities", or_default(c.atlas_entities, data_dir() + "/culture_entities.tsv"));
  add_input(m, "atlas_languages", or_default(c.atlas_languages, data_dir() + "/culture_languages.tsv"));
  for (const auto& [name, path] : c.indices) add_input(m, "index:" + name, path);
  m["reports"] = selected;
  m["skipped"] = outcome.skipped;
  m["outputs"] = outcome.written;
  m["warnings"] = outcome.warnings.size();
  write_manifest(c, "manifest_report.json", m);
  return outcome;
}

FetchSummary cmd_fetch_articles(const PipelineConfig& c, std::ostream& log) {
  auto records_path = or_default(c.records, (fs::path(c.out_dir) / "records.csv").string());
  require_file(records_path, "records file");
  auto titles_path =
      or_default(c.titles, (fs::path(records_path).parent_path() / "sitelink_titles.csv").string());
  require_file(titles_path, "sitelink titles file");
  if (c.cache_dir.empty()) throw InputError("fetch-articles needs --cache");

  auto records = records::read_records(records_path);
  auto titles = records::read_titles(titles_path);
  auto lexicon = load_lexicon(c);

  celebrity::ClientConfig cc;
  cc.cache_dir = c.cache_dir;
  cc.user_agent = c.user_agent;
  cc.network_enabled = c.allow_network;
  cc.offline = c.offline;
  cc.min_interval = std::chrono::milliseconds(c.min_interval_ms);
  celebrity::ArticleClient client(cc);

  // Fetch exactly what the probe would read: record its source lookups.
  class Recorder : public celebrity::ArticleSource {
   public:
    explicit Recorder(celebrity::ArticleClient& client) : client_(client) {}
    std::optional<std::string> text(const std::string& wiki, const std::string& title) override {
      auto t = client_.text(wiki, title);
      if (!t) ++missing;
      return t;
    }
    std::uint64_t missing = 0;

   private:
    celebrity::ArticleClient& client_;
  } recorder(client);

  auto obs = celebrity::build_observations(records, titles, recorder, lexicon, c.celebrity_years);
  FetchSummary s;
  s.fetched = client.network_requests();
  s.cached = client.cache_hits();
  s.missing = recorder.missing;
  log << fmt::format("fetch-articles: {} observations, {} requests, {} cache hits, {} missing\n",
                     obs.observations.size(), s.fetched, s.cached, s.missing);
  return s;
}

}  // namespace wigi::pipeline
