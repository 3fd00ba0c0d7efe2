#include "wigi/indicators.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

#include "wigi/csv.hpp"
#include "wigi/errors.hpp"

namespace wigi::indicators {

namespace {

/// Runs `partial(begin, end)` over contiguous chunks and merges the results
/// in chunk order.
template <typename T, typename Partial, typename Merge>
T chunked(std::size_t n, unsigned threads, Partial&& partial, Merge&& merge) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2 * threads) return partial(std::size_t{0}, n);
  std::vector<T> parts(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t begin = std::min(n, t * chunk);
      std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, t, begin, end] { parts[t] = partial(begin, end); });
    }
  }
  T out = std::move(parts[0]);
  for (unsigned t = 1; t < threads; ++t) merge(out, parts[t]);
  return out;
}

std::optional<std::int64_t> anchor_year(const HumanRecord& r, DateAnchor anchor) {
  const auto& date = anchor == DateAnchor::Birth ? r.birth : r.death;
  if (!date || !date->bucketable()) return std::nullopt;
  return date->year;
}

double parse_number(const std::string& text, const std::string& file, std::size_t row) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw RowError(file, row, "malformed number '" + text + "'");
  }
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::uint64_t GenderTally::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t GenderTally::nonbinary_total() const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < kGenderKindCount; ++i) {
    if (kNonbinary.contains(static_cast<GenderKind>(i))) n += counts[i];
  }
  return n;
}

GenderTally& GenderTally::merge(const GenderTally& other) {
  for (std::size_t i = 0; i < kGenderKindCount; ++i) counts[i] += other.counts[i];
  return *this;
}

double gender_ratio(const GenderTally& tally, GenderSet classes) {
  const auto known = tally.known_total();
  if (known == 0) throw DomainError("ratio undefined: no known-gender records");
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < kGenderKindCount; ++i) {
    auto k = static_cast<GenderKind>(i);
    if (k != GenderKind::Unknown && classes.contains(k)) hits += tally.counts[i];
  }
  return static_cast<double>(hits) / static_cast<double>(known);
}

std::int64_t bucket_of(std::int64_t year, BucketWidth width) {
  const auto w = static_cast<std::int64_t>(width);
  std::int64_t q = year / w;
  if (year % w != 0 && year < 0) --q;
  return q * w;
}

RatioSeries build_series(std::span<const HumanRecord> records, DateAnchor anchor,
                         BucketWidth width, const RecordFilter& filter, unsigned threads) {
  using Points = std::map<std::int64_t, GenderTally>;
  RatioSeries series;
  series.width = width;
  series.anchor = anchor;
  series.points = chunked<Points>(
      records.size(), threads,
      [&](std::size_t begin, std::size_t end) {
        Points pts;
        for (std::size_t i = begin; i < end; ++i) {
          const auto& r = records[i];
          auto year = anchor_year(r, anchor);
          if (!year) continue;
          if (filter && !filter(r)) continue;
          pts[bucket_of(*year, width)].add(r.gender);
        }
        return pts;
      },
      [](Points& into, const Points& from) {
        for (const auto& [k, t] : from) into[k].merge(t);
      });
  return series;
}

GenderTally tally_all(std::span<const HumanRecord> records, unsigned threads) {
  return chunked<GenderTally>(
      records.size(), threads,
      [&](std::size_t begin, std::size_t end) {
        GenderTally t;
        for (std::size_t i = begin; i < end; ++i) t.add(records[i].gender);
        return t;
      },
      [](GenderTally& into, const GenderTally& from) { into.merge(from); });
}

std::vector<NationalScore> national_scores(std::span<const HumanRecord> records,
                                           std::int64_t start_decade, std::uint64_t min_count,
                                           ScoreGeography geography) {
  std::map<EntityId, GenderTally> by_country;
  for (const auto& r : records) {
    if (!r.gender.is_known()) continue;
    auto year = anchor_year(r, DateAnchor::Birth);
    if (!year || bucket_of(*year, BucketWidth::Decade) < start_decade) continue;
    if (geography == ScoreGeography::Country) {
      if (r.country) by_country[*r.country].add(r.gender);
    } else {
      for (const auto& c : r.citizenships) by_country[c].add(r.gender);
    }
  }
  std::vector<NationalScore> out;
  for (const auto& [country, tally] : by_country) {
    if (tally.known_total() < min_count || tally.known_total() == 0) continue;
    out.push_back({country, gender_ratio(tally, kFemale), tally.known_total(), start_decade});
  }
  std::sort(out.begin(), out.end(), [](const NationalScore& a, const NationalScore& b) {
    if (a.female_ratio != b.female_ratio) return a.female_ratio > b.female_ratio;
    return a.country < b.country;
  });
  return out;
}

ExternalIndex read_external_index(const std::string& path) {
  auto in = open(path);
  csv::Reader reader(in, path);
  reader.require_header({"country_qid", "score"});
  ExternalIndex out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    auto id = EntityId::try_parse(f[0]);
    if (!id) throw RowError(path, reader.row(), "malformed country id '" + f[0] + "'");
    if (!out.emplace(*id, parse_number(f[1], path, reader.row())).second) {
      throw RowError(path, reader.row(), "duplicate country " + f[0]);
    }
  }
  return out;
}

std::vector<JoinedScore> join_scores(const std::vector<NationalScore>& scores,
                                     const ExternalIndex& external) {
  std::vector<JoinedScore> out;
  for (const auto& s : scores) {
    auto it = external.find(s.country);
    if (it != external.end()) out.push_back({s.country, s.female_ratio, it->second});
  }
  return out;
}

Calibration calibrate_start_decade(std::span<const HumanRecord> records,
                                   const ExternalIndex& external, const DecadeGrid& grid,
                                   std::uint64_t min_count, ScoreGeography geography) {
  if (grid.step <= 0 || grid.last < grid.first) throw InputError("empty calibration grid");
  constexpr std::size_t kMinShared = 5;
  Calibration result;
  std::size_t most_shared = 0;
  bool found = false;
  for (std::int64_t decade = grid.first; decade <= grid.last; decade += grid.step) {
    auto joined = join_scores(national_scores(records, decade, min_count, geography), external);
    CalibrationPoint point;
    point.decade = decade;
    point.shared = joined.size();
    most_shared = std::max(most_shared, joined.size());
    if (joined.size() >= kMinShared) {
      std::vector<double> w, e;
      for (const auto& j : joined) {
        w.push_back(j.wigi_score);
        e.push_back(j.external_score);
      }
      try {
        point.correlation = stats::spearman(w, e);
      } catch (const DomainError&) {
        // constant ranking at this decade; ineligible
      }
    }
    if (point.correlation && (!found || point.correlation->coefficient > result.rho)) {
      found = true;
      result.decade = decade;
      result.rho = point.correlation->coefficient;
      result.p_value = point.correlation->p_value;
      result.shared = point.shared;
    }
    result.grid.push_back(point);
  }
  if (!found) {
    throw DomainError("calibration needs at least 5 countries shared with the external index; "
                      "best decade shares " + std::to_string(most_shared));
  }
  return result;
}

PopulationTable read_population(const std::string& path) {
  auto in = open(path);
  csv::Reader reader(in, path);
  reader.require_header({"year", "population"});
  PopulationTable out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    double year = parse_number(f[0], path, reader.row());
    if (year != static_cast<double>(static_cast<std::int64_t>(year))) {
      throw RowError(path, reader.row(), "year must be an integer");
    }
    out.emplace_back(static_cast<std::int64_t>(year), parse_number(f[1], path, reader.row()));
  }
  return out;
}

stats::CorrelationResult population_correlation(const RatioSeries& series,
                                                const PopulationTable& population) {
  std::map<std::int64_t, std::pair<double, int>> buckets;
  for (const auto& [year, pop] : population) {
    auto& b = buckets[bucket_of(year, series.width)];
    b.first += pop;
    b.second += 1;
  }
  std::vector<double> bios, pops;
  for (const auto& [bucket, tally] : series.points) {
    auto it = buckets.find(bucket);
    if (it == buckets.end()) continue;
    bios.push_back(static_cast<double>(tally.total()));
    pops.push_back(it->second.first / it->second.second);
  }
  if (bios.size() < 3) {
    throw DomainError("population correlation needs 3 overlapping buckets, got " +
                      std::to_string(bios.size()));
  }
  return stats::pearson(bios, pops);
}

LanguageReport by_language(std::span<const HumanRecord> records, std::size_t top_n,
                           unsigned threads) {
  using Tallies = std::map<std::string, GenderTally>;
  auto tallies = chunked<Tallies>(
      records.size(), threads,
      [&](std::size_t begin, std::size_t end) {
        Tallies t;
        for (std::size_t i = begin; i < end; ++i) {
          for (const auto& wiki : records[i].sitelinks) t[wiki].add(records[i].gender);
        }
        return t;
      },
      [](Tallies& into, const Tallies& from) {
        for (const auto& [k, t] : from) into[k].merge(t);
      });

  std::vector<std::pair<std::string, GenderTally>> ordered(tallies.begin(), tallies.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.second.total() > b.second.total();
  });
  if (ordered.size() > top_n) ordered.resize(top_n);

  LanguageReport report;
  for (const auto& [wiki, tally] : ordered) {
    if (tally.known_total() == 0) {
      report.warnings.push_back(wiki + ": no known-gender biographies, omitted");
      continue;
    }
    report.rows.push_back({wiki, tally.total(), tally.known_total(), gender_ratio(tally, kFemale),
                           gender_ratio(tally, kNonbinary)});
  }
  return report;
}

UniquenessReport uniqueness_deltas(std::span<const HumanRecord> records) {
  std::map<std::string, std::pair<GenderTally, GenderTally>> by_wiki;  // unique, many
  for (const auto& r : records) {
    if (r.sitelinks.empty()) continue;
    bool unique = r.sitelinks.size() == 1;
    for (const auto& wiki : r.sitelinks) {
      auto& slot = by_wiki[wiki];
      (unique ? slot.first : slot.second).add(r.gender);
    }
  }
  UniquenessReport report;
  for (const auto& [wiki, parts] : by_wiki) {
    const auto& [unique, many] = parts;
    if (unique.known_total() == 0 || many.known_total() == 0) {
      report.warnings.push_back(wiki + ": " +
                                (unique.known_total() == 0 ? "no language-unique" : "no language-many") +
                                " known-gender items, omitted");
      continue;
    }
    UniquenessDelta d;
    d.wiki = wiki;
    d.unique_female_ratio = gender_ratio(unique, kFemale);
    d.many_female_ratio = gender_ratio(many, kFemale);
    d.delta = d.unique_female_ratio - d.many_female_ratio;
    d.unique_count = unique.total();
    d.many_count = many.total();
    report.rows.push_back(d);
  }
  return report;
}

CultureAggregate sitelink_culture_aggregate(std::span<const HumanRecord> records,
                                            const culture::Atlas& atlas) {
  CultureAggregate out;
  for (const auto& r : records) {
    if (r.sitelinks.empty()) continue;
    std::set<culture::Cluster> clusters;
    for (const auto& wiki : r.sitelinks) {
      auto c = atlas.language(wiki);
      if (c != culture::Cluster::Unassigned) clusters.insert(c);
    }
    if (clusters.empty()) {
      out.unassigned.add(r.gender);
      continue;
    }
    for (auto c : clusters) out.clusters[c].add(r.gender);
  }
  return out;
}

CultureBreakdown culture_breakdown(std::span<const HumanRecord> records,
                                   const culture::Atlas& atlas) {
  CultureBreakdown out;
  for (const auto& r : records) {
    auto consensus = culture::consensus_culture(r, atlas);
    out.clusters[consensus.cluster].add(r.gender);
    ++out.outcomes[consensus.outcome];
  }
  return out;
}

std::vector<ArticleSize> read_sizes(const std::string& path) {
  auto in = open(path);
  csv::Reader reader(in, path);
  reader.require_header({"wiki", "title", "bytes"});
  std::vector<ArticleSize> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    double bytes = parse_number(f[2], path, reader.row());
    if (bytes < 0) throw RowError(path, reader.row(), "negative byte count");
    out.push_back({f[0], f[1], bytes});
  }
  return out;
}

SizeReport article_size_stats(std::span<const HumanRecord> records,
                              std::span<const SitelinkTitle> titles,
                              std::span<const ArticleSize> sizes, std::size_t top_n,
                              std::uint64_t min_count) {
  auto top = by_language(records, top_n);
  std::set<std::string> top_wikis;
  for (const auto& row : top.rows) top_wikis.insert(row.wiki);

  std::unordered_map<EntityId, const HumanRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.id, &r);
  std::map<std::pair<std::string, std::string>, EntityId> by_title;
  for (const auto& t : titles) by_title.emplace(std::make_pair(t.wiki, t.title), t.id);

  struct Sums {
    double male = 0.0, female = 0.0;
    std::uint64_t n_male = 0, n_female = 0;
  };
  std::map<std::string, Sums> sums;
  SizeReport report;
  for (const auto& s : sizes) {
    auto t = by_title.find({s.wiki, s.title});
    const HumanRecord* rec = nullptr;
    if (t != by_title.end()) {
      auto r = by_id.find(t->second);
      if (r != by_id.end()) rec = r->second;
    }
    if (!rec) {
      ++report.unjoined_rows;
      continue;
    }
    if (!top_wikis.count(s.wiki)) continue;
    auto& acc = sums[s.wiki];
    if (rec->gender.kind == GenderKind::Male) {
      acc.male += s.bytes;
      ++acc.n_male;
    } else if (rec->gender.kind == GenderKind::Female) {
      acc.female += s.bytes;
      ++acc.n_female;
    }
  }
  std::vector<double> x, y;
  for (const auto& [wiki, acc] : sums) {
    if (acc.n_male < min_count || acc.n_female < min_count || acc.n_male == 0 || acc.n_female == 0) {
      report.warnings.push_back(wiki + ": fewer than " + std::to_string(min_count) +
                                " sized articles per gender, omitted");
      continue;
    }
    SizeStats st{wiki, acc.male / static_cast<double>(acc.n_male),
                 acc.female / static_cast<double>(acc.n_female), acc.n_male, acc.n_female};
    x.push_back(st.mean_bytes_male);
    y.push_back(st.mean_bytes_female);
    report.rows.push_back(st);
  }
  if (report.rows.size() < 2) {
    throw DomainError("article size regression needs at least 2 wikis, got " +
                      std::to_string(report.rows.size()));
  }
  report.fit = stats::ols(x, y);
  return report;
}

}  // namespace wigi::indicators
