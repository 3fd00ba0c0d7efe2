#include "wigi/records_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_set>

#include "wigi/csv.hpp"
#include "wigi/errors.hpp"

namespace wigi::records {

namespace {

std::string join_ids(const std::set<EntityId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += '|';
    out += id.str();
  }
  return out;
}

std::string join_codes(const std::set<std::string>& codes) {
  std::string out;
  for (const auto& c : codes) {
    if (!out.empty()) out += '|';
    out += c;
  }
  return out;
}

std::vector<std::string_view> split_pipes(std::string_view s) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  while (true) {
    auto bar = s.find('|');
    out.push_back(s.substr(0, bar));
    if (bar == std::string_view::npos) break;
    s.remove_prefix(bar + 1);
  }
  return out;
}

std::int64_t parse_year(std::string_view text) {
  std::int64_t y = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), y);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("malformed year '" + std::string(text) + "'");
  }
  return y;
}

std::optional<YearValue> parse_date(const std::string& year, const std::string& precision) {
  if (year.empty() != precision.empty()) throw InputError("year and precision must both be set");
  if (year.empty()) return std::nullopt;
  return YearValue{parse_year(year), parse_precision(precision)};
}

void add_date(std::vector<std::string>& row, const std::optional<YearValue>& d) {
  row.push_back(d ? std::to_string(d->year) : "");
  row.push_back(d ? std::string(to_string(d->precision)) : "");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::size_t write_records(std::vector<HumanRecord> records, std::ostream& out) {
  std::sort(records.begin(), records.end(),
            [](const HumanRecord& a, const HumanRecord& b) { return a.id < b.id; });
  auto dup = std::adjacent_find(records.begin(), records.end(),
                                [](const auto& a, const auto& b) { return a.id == b.id; });
  if (dup != records.end()) throw InputError("duplicate record id " + dup->id.str());

  csv::write_row(out, kColumns);
  std::vector<std::string> row;
  for (const auto& r : records) {
    row.clear();
    row.push_back(r.id.str());
    row.push_back(to_string(r.gender));
    add_date(row, r.birth);
    add_date(row, r.death);
    row.push_back(r.place_of_birth ? r.place_of_birth->str() : "");
    row.push_back(r.country ? r.country->str() : "");
    row.push_back(join_ids(r.citizenships));
    row.push_back(join_ids(r.ethnic_groups));
    row.push_back(join_codes(r.sitelinks));
    csv::write_row(out, row);
  }
  return records.size();
}

std::size_t write_records(std::vector<HumanRecord> records, const std::string& path) {
  auto out = open_out(path);
  return write_records(std::move(records), out);
}

std::vector<HumanRecord> read_records(std::istream& in, const std::string& name) {
  csv::Reader reader(in, name);
  reader.require_header(kColumns);
  std::vector<HumanRecord> out;
  std::unordered_set<EntityId> seen;
  std::vector<std::string> f;
  while (reader.next(f)) {
    HumanRecord r;
    try {
      r.id = EntityId::parse(f[0]);
      r.gender = parse_gender(f[1]);
      r.birth = parse_date(f[2], f[3]);
      r.death = parse_date(f[4], f[5]);
      if (!f[6].empty()) r.place_of_birth = EntityId::parse(f[6]);
      if (!f[7].empty()) r.country = EntityId::parse(f[7]);
      for (auto v : split_pipes(f[8])) r.citizenships.insert(EntityId::parse(v));
      for (auto v : split_pipes(f[9])) r.ethnic_groups.insert(EntityId::parse(v));
      for (auto v : split_pipes(f[10])) {
        if (v.size() <= 4 || v.substr(v.size() - 4) != "wiki") {
          throw InputError("malformed sitelink code '" + std::string(v) + "'");
        }
        r.sitelinks.emplace(v);
      }
    } catch (const RowError&) {
      throw;
    } catch (const InputError& e) {
      throw RowError(name, reader.row(), e.what());
    }
    if (!seen.insert(r.id).second) {
      throw RowError(name, reader.row(), "duplicate id " + r.id.str());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<HumanRecord> read_records(const std::string& path) {
  auto in = open_in(path);
  return read_records(in, path);
}

std::size_t write_titles(std::vector<SitelinkTitle> titles, std::ostream& out) {
  std::sort(titles.begin(), titles.end());
  csv::write_row(out, kTitleColumns);
  for (const auto& t : titles) csv::write_row(out, {t.id.str(), t.wiki, t.title});
  return titles.size();
}

std::size_t write_titles(std::vector<SitelinkTitle> titles, const std::string& path) {
  auto out = open_out(path);
  return write_titles(std::move(titles), out);
}

std::vector<SitelinkTitle> read_titles(const std::string& path) {
  auto in = open_in(path);
  csv::Reader reader(in, path);
  reader.require_header(kTitleColumns);
  std::vector<SitelinkTitle> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    try {
      out.push_back(SitelinkTitle{EntityId::parse(f[0]), f[1], f[2]});
    } catch (const InputError& e) {
      throw RowError(path, reader.row(), e.what());
    }
  }
  return out;
}

}  // namespace wigi::records
