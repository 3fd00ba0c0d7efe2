#include "wigi/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <string>
#include <thread>

#include <json.hpp>

#include "wigi/errors.hpp"

namespace wigi::ingest {

namespace {

using json = nlohmann::json;

int rank_order(const json& statement) {
  auto it = statement.find("rank");
  if (it == statement.end() || !it->is_string()) return 1;
  const auto& r = it->get_ref<const std::string&>();
  if (r == "preferred") return 2;
  if (r == "deprecated") return 0;
  return 1;
}

/// Values of the highest-ranked non-deprecated statements, in dump order.
std::vector<const json*> best_values(const json& claims, const std::string& property) {
  std::vector<const json*> out;
  auto it = claims.find(property);
  if (it == claims.end()) return out;
  int best = 1;
  for (const auto& statement : it->get_ref<const json::array_t&>()) {
    best = std::max(best, rank_order(statement));
  }
  for (const auto& statement : it->get_ref<const json::array_t&>()) {
    if (rank_order(statement) != best) continue;
    const auto& snak = statement.at("mainsnak");
    if (snak.value("snaktype", std::string("value")) != "value") continue;
    out.push_back(&snak.at("datavalue").at("value"));
  }
  return out;
}

/// All non-deprecated values, in dump order.
std::vector<const json*> all_values(const json& claims, const std::string& property) {
  std::vector<const json*> out;
  auto it = claims.find(property);
  if (it == claims.end()) return out;
  for (const auto& statement : it->get_ref<const json::array_t&>()) {
    if (rank_order(statement) == 0) continue;
    const auto& snak = statement.at("mainsnak");
    if (snak.value("snaktype", std::string("value")) != "value") continue;
    out.push_back(&snak.at("datavalue").at("value"));
  }
  return out;
}

std::optional<EntityId> item_value(const json& value) {
  if (!value.is_object()) return std::nullopt;
  if (auto it = value.find("id"); it != value.end() && it->is_string()) {
    return EntityId::try_parse(it->get_ref<const std::string&>());
  }
  if (auto it = value.find("numeric-id"); it != value.end() && it->is_number_unsigned()) {
    auto n = it->get<std::uint64_t>();
    if (n > 0 && value.value("entity-type", std::string("item")) == "item") return EntityId{n};
  }
  return std::nullopt;
}

/// Wikidata timestamps look like "+1952-03-11T00:00:00Z" or
/// "-00000000044-03-15T00:00:00Z"; negative years count BCE without a year 0.
std::optional<YearValue> time_value(const json& value) {
  if (!value.is_object()) return std::nullopt;
  const auto& text = value.at("time").get_ref<const std::string&>();
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto dash = text.find('-', pos);
  if (dash == std::string::npos || dash == pos) return std::nullopt;
  std::int64_t magnitude = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + dash, magnitude);
  if (ec != std::errc{} || ptr != text.data() + dash) return std::nullopt;

  YearValue out;
  out.year = negative ? 1 - magnitude : magnitude;
  int precision = value.value("precision", 11);
  if (precision >= 9) {
    out.precision = DatePrecision::Year;
  } else if (precision == 8) {
    out.precision = DatePrecision::Decade;
  } else if (precision == 7) {
    out.precision = DatePrecision::Century;
  } else if (precision == 6) {
    out.precision = DatePrecision::Millennium;
  } else {
    out.precision = DatePrecision::Coarser;
  }
  return out;
}

std::optional<YearValue> first_date(const json& claims, const std::string& property) {
  for (const json* v : best_values(claims, property)) {
    if (auto y = time_value(*v)) return y;
  }
  return std::nullopt;
}

std::optional<EntityId> first_item(const json& claims, const std::string& property) {
  for (const json* v : best_values(claims, property)) {
    if (auto id = item_value(*v)) return id;
  }
  return std::nullopt;
}

std::set<EntityId> item_set(const json& claims, const std::string& property) {
  std::set<EntityId> out;
  for (const json* v : all_values(claims, property)) {
    if (auto id = item_value(*v)) out.insert(*id);
  }
  return out;
}

HumanEntity build_human(EntityId id, const json& entity, const json& claims,
                        const PropertyConfig& config) {
  HumanEntity h;
  auto& r = h.record;
  r.id = id;

  std::optional<EntityId> chosen;
  for (const json* v : best_values(claims, config.gender)) {
    auto g = item_value(*v);
    if (!g) continue;
    if (!chosen) {
      chosen = g;
    } else if (*g != *chosen) {
      h.gender_conflict = true;
    }
  }
  if (chosen) r.gender = config.map_gender(*chosen);

  r.birth = first_date(claims, config.birth_date);
  r.death = first_date(claims, config.death_date);
  for (const auto& d : {r.birth, r.death}) {
    if (d && !d->bucketable()) ++h.coarse_dates;
  }
  r.place_of_birth = first_item(claims, config.place_of_birth);
  r.citizenships = item_set(claims, config.citizenship);
  r.ethnic_groups = item_set(claims, config.ethnic_group);

  if (auto sl = entity.find("sitelinks"); sl != entity.end() && sl->is_object()) {
    for (const auto& [code, link] : sl->items()) {
      if (!config.is_wikipedia(code)) continue;
      r.sitelinks.insert(code);
      if (link.is_object()) {
        if (auto t = link.find("title"); t != link.end() && t->is_string()) {
          h.titles.push_back(SitelinkTitle{id, code, t->get<std::string>()});
        }
      }
    }
  }
  return h;
}

std::string_view trim_line(std::string_view line) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
  while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
  if (!line.empty() && line.back() == ',') line.remove_suffix(1);
  while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
  return line;
}

struct PendingLine {
  std::uint64_t number;
  std::string text;
};

}  // namespace

Classified classify_entity(std::string_view text, const PropertyConfig& config) {
  json entity;
  try {
    entity = json::parse(text);
  } catch (const json::parse_error& e) {
    return Malformed{e.what()};
  }
  if (!entity.is_object()) return Malformed{"entity is not a JSON object"};
  try {
    auto id_it = entity.find("id");
    if (id_it == entity.end() || !id_it->is_string()) return Malformed{"missing entity id"};
    const auto& id_text = id_it->get_ref<const std::string&>();
    auto id = EntityId::try_parse(id_text);
    if (!id) {
      // properties, lexemes and other non-item entities
      if (!id_text.empty() && id_text.front() != 'Q') return Skipped{};
      return Malformed{"malformed entity id '" + id_text + "'"};
    }

    static const json kNoClaims = json::object();
    const json* claims = &kNoClaims;
    if (auto c = entity.find("claims"); c != entity.end()) {
      if (c->is_object()) {
        claims = &*c;
      } else if (!(c->is_array() && c->empty())) {  // old dumps use [] for "no claims"
        return Malformed{"claims is not an object"};
      }
    }

    bool human = false;
    bool country = false;
    for (const json* v : all_values(*claims, config.instance_of)) {
      auto cls = item_value(*v);
      if (!cls) continue;
      if (*cls == config.human) human = true;
      if (config.country_values.count(*cls)) country = true;
    }
    if (human) return build_human(*id, entity, *claims, config);

    auto containing = first_item(*claims, config.country_of_place);
    if (country || containing) return PlaceRecord{*id, country, containing};
    return Skipped{};
  } catch (const json::exception& e) {
    return Malformed{e.what()};
  }
}

std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept {
  std::size_t i = 0;
  const auto n = bytes.size();
  while (i < n) {
    auto c = static_cast<unsigned char>(bytes[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len;
    std::uint32_t cp;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::nullopt;
}

IngestStats stream_entities(std::istream& dump, const PropertyConfig& config, RecordSink& sink,
                            const StreamOptions& options) {
  IngestStats stats;
  const unsigned threads = std::max(1u, options.threads);
  const std::size_t batch_capacity = std::max<std::size_t>(1, options.batch_lines) * threads;

  std::vector<PendingLine> batch;
  std::vector<Classified> results;
  batch.reserve(batch_capacity);

  auto flush = [&] {
    results.assign(batch.size(), Skipped{});
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        results[i] = classify_entity(batch[i].text, config);
      }
    };
    if (threads == 1 || batch.size() < 2) {
      work(0, batch.size());
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (batch.size() + threads - 1) / threads;
      for (std::size_t begin = 0; begin < batch.size(); begin += chunk) {
        pool.emplace_back(work, begin, std::min(batch.size(), begin + chunk));
      }
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
      ++stats.entities_seen;
      std::visit(
          [&](auto&& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, HumanEntity>) {
              ++stats.humans;
              if (r.gender_conflict) ++stats.gender_conflicts;
              stats.coarse_dates += static_cast<std::uint64_t>(r.coarse_dates);
              sink.on_human(std::move(r.record), std::move(r.titles));
            } else if constexpr (std::is_same_v<T, PlaceRecord>) {
              ++stats.places;
              sink.on_place(std::move(r));
            } else if constexpr (std::is_same_v<T, Skipped>) {
              ++stats.skipped;
            } else {
              if (options.strict) throw ParseError(batch[i].number, r.reason);
              ++stats.malformed;
              if (stats.malformed_lines.size() < IngestStats::kMaxMalformedLines) {
                stats.malformed_lines.push_back(batch[i].number);
              }
            }
          },
          results[i]);
    }
    batch.clear();
    results.clear();
  };

  std::string line;
  std::uint64_t line_number = 0;
  std::uint64_t offset = 0;
  while (std::getline(dump, line)) {
    ++line_number;
    if (auto bad = find_invalid_utf8(line)) throw Utf8Error(offset + *bad);
    offset += line.size() + 1;
    auto text = trim_line(line);
    if (text.empty() || text == "[" || text == "]") continue;
    batch.push_back(PendingLine{line_number, std::string(text)});
    if (batch.size() >= batch_capacity) flush();
  }
  if (dump.bad()) throw InputError("read error on dump stream");
  flush();
  return stats;
}

std::optional<EntityId> resolve_country(const HumanRecord& record, const PlaceIndex& places) {
  if (!record.place_of_birth) return std::nullopt;
  auto it = places.find(*record.place_of_birth);
  if (it == places.end()) return std::nullopt;
  if (it->second.is_country) return it->second.id;
  return it->second.containing_country;
}

}  // namespace wigi::ingest
