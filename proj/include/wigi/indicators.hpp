#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wigi/culture.hpp"
#include "wigi/entity.hpp"
#include "wigi/stats.hpp"

namespace wigi::indicators {

/// Per-class gender counts. Merging is commutative and associative.
struct GenderTally {
  std::array<std::uint64_t, kGenderKindCount> counts{};

  void add(const Gender& g, std::uint64_t n = 1) { counts[static_cast<std::size_t>(g.kind)] += n; }
  void add(GenderKind k, std::uint64_t n = 1) { counts[static_cast<std::size_t>(k)] += n; }
  std::uint64_t count(GenderKind k) const { return counts[static_cast<std::size_t>(k)]; }
  std::uint64_t total() const;
  std::uint64_t known_total() const { return total() - count(GenderKind::Unknown); }
  std::uint64_t nonbinary_total() const;
  bool empty() const { return total() == 0; }
  GenderTally& merge(const GenderTally& other);

  friend bool operator==(const GenderTally&, const GenderTally&) = default;
};

/// Bit set over GenderKind.
class GenderSet {
 public:
  constexpr GenderSet() = default;
  constexpr GenderSet(std::initializer_list<GenderKind> kinds) {
    for (auto k : kinds) bits_ |= 1u << static_cast<unsigned>(k);
  }
  constexpr bool contains(GenderKind k) const { return bits_ & (1u << static_cast<unsigned>(k)); }

 private:
  unsigned bits_ = 0;
};

inline constexpr GenderSet kFemale{GenderKind::Female};
inline constexpr GenderSet kMale{GenderKind::Male};
inline constexpr GenderSet kNonbinary{
    GenderKind::TransgenderFemale, GenderKind::TransgenderMale, GenderKind::Intersex,
    GenderKind::Genderqueer,       GenderKind::Faafafine,       GenderKind::Kathoey,
    GenderKind::OtherNonbinary,
};

/// Share of known-gender records whose class is in `classes`.
/// Throws DomainError when the tally has no known-gender records.
double gender_ratio(const GenderTally& tally, GenderSet classes);

enum class BucketWidth : std::int64_t { Decade = 10, Century = 100, Millennium = 1000 };
enum class DateAnchor { Birth, Death };

/// Start of the bucket containing `year`, flooring toward negative infinity.
std::int64_t bucket_of(std::int64_t year, BucketWidth width);

struct RatioSeries {
  BucketWidth width = BucketWidth::Decade;
  DateAnchor anchor = DateAnchor::Birth;
  std::map<std::int64_t, GenderTally> points;  // bucket start -> tally, never empty
};

using RecordFilter = std::function<bool(const HumanRecord&)>;

/// Tallies each record with a year-precision anchor date into its bucket.
/// `threads` only affects speed; the result is identical for any value.
RatioSeries build_series(std::span<const HumanRecord> records, DateAnchor anchor,
                         BucketWidth width, const RecordFilter& filter = {},
                         unsigned threads = 1);

/// Tally of all records regardless of dates.
GenderTally tally_all(std::span<const HumanRecord> records, unsigned threads = 1);

enum class ScoreGeography { Country, Citizenship };

struct NationalScore {
  EntityId country;
  double female_ratio = 0.0;
  std::uint64_t n = 0;  // known-gender records
  std::int64_t start_decade = 0;
};

/// Female ratio per country over known-gender records born in or after
/// `start_decade`; sorted by ratio descending, ties by country id.
std::vector<NationalScore> national_scores(std::span<const HumanRecord> records,
                                           std::int64_t start_decade, std::uint64_t min_count = 10,
                                           ScoreGeography geography = ScoreGeography::Country);

using ExternalIndex = std::map<EntityId, double>;

/// Reads `country_qid,score`.
ExternalIndex read_external_index(const std::string& path);

struct DecadeGrid {
  std::int64_t first = 1800;
  std::int64_t last = 1990;
  std::int64_t step = 10;
};

struct CalibrationPoint {
  std::int64_t decade = 0;
  std::size_t shared = 0;
  std::optional<stats::CorrelationResult> correlation;  // empty when undefined
};

struct Calibration {
  std::int64_t decade = 0;
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t shared = 0;
  std::vector<CalibrationPoint> grid;
};

/// Scores countries and the external index at every grid decade, returning
/// the decade with the largest Spearman rho (earliest on ties). Decades
/// with fewer than 5 shared countries are ineligible; throws DomainError
/// when no decade is eligible.
Calibration calibrate_start_decade(std::span<const HumanRecord> records,
                                   const ExternalIndex& external, const DecadeGrid& grid = {},
                                   std::uint64_t min_count = 10,
                                   ScoreGeography geography = ScoreGeography::Country);

/// Spearman correlation of the national scores with an external index at a
/// single decade (the joined country list is returned via `joined`).
struct JoinedScore {
  EntityId country;
  double wigi_score;
  double external_score;
};
std::vector<JoinedScore> join_scores(const std::vector<NationalScore>& scores,
                                     const ExternalIndex& external);

using PopulationTable = std::vector<std::pair<std::int64_t, double>>;

/// Reads `year,population`.
PopulationTable read_population(const std::string& path);

/// Pearson correlation between per-bucket biography totals and population.
/// Population rows are averaged within each bucket. Needs >= 3 shared buckets.
stats::CorrelationResult population_correlation(const RatioSeries& series,
                                                const PopulationTable& population);

struct LanguageRow {
  std::string wiki;
  std::uint64_t total = 0;
  std::uint64_t known = 0;
  double female_ratio = 0.0;
  double nonbinary_ratio = 0.0;
};

struct LanguageReport {
  std::vector<LanguageRow> rows;  // by total descending, then code
  std::vector<std::string> warnings;
};

/// Tallies every record once per Wikipedia in its sitelinks and keeps the
/// `top_n` largest.
LanguageReport by_language(std::span<const HumanRecord> records, std::size_t top_n,
                           unsigned threads = 1);

struct UniquenessDelta {
  std::string wiki;
  double unique_female_ratio = 0.0;
  double many_female_ratio = 0.0;
  double delta = 0.0;
  std::uint64_t unique_count = 0;
  std::uint64_t many_count = 0;
};

struct UniquenessReport {
  std::vector<UniquenessDelta> rows;  // by wiki code
  std::vector<std::string> warnings;
};

/// Language-unique items have exactly one sitelink; language-many items
/// have more. Wikis with an undefined ratio in either partition are omitted.
UniquenessReport uniqueness_deltas(std::span<const HumanRecord> records);

struct CultureAggregate {
  std::map<culture::Cluster, GenderTally> clusters;
  GenderTally unassigned;  // items with sitelinks, none of them mapped
};

/// Counts an item once for each cluster among its sitelink languages.
CultureAggregate sitelink_culture_aggregate(std::span<const HumanRecord> records,
                                            const culture::Atlas& atlas);

struct CultureBreakdown {
  std::map<culture::Cluster, GenderTally> clusters;  // Unassigned included as a key
  std::map<culture::ConsensusOutcome, std::uint64_t> outcomes;
};

/// Gender tallies by consensus culture.
CultureBreakdown culture_breakdown(std::span<const HumanRecord> records,
                                   const culture::Atlas& atlas);

struct ArticleSize {
  std::string wiki;
  std::string title;
  double bytes = 0.0;
};

/// Reads `wiki,title,bytes`.
std::vector<ArticleSize> read_sizes(const std::string& path);

struct SizeStats {
  std::string wiki;
  double mean_bytes_male = 0.0;
  double mean_bytes_female = 0.0;
  std::uint64_t n_male = 0;
  std::uint64_t n_female = 0;
};

struct SizeReport {
  std::vector<SizeStats> rows;  // by wiki code
  stats::OlsFit fit;            // female mean on male mean
  std::uint64_t unjoined_rows = 0;
  std::vector<std::string> warnings;
};

/// Mean article size by binary gender for the `top_n` largest wikis, then
/// OLS of the female mean on the male mean. Throws DomainError when fewer
/// than two wikis qualify.
SizeReport article_size_stats(std::span<const HumanRecord> records,
                              std::span<const SitelinkTitle> titles,
                              std::span<const ArticleSize> sizes, std::size_t top_n,
                              std::uint64_t min_count = 10);

}  // namespace wigi::indicators
