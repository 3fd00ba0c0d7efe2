#include "wigi/property_config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <vector>

#include "wigi/errors.hpp"

namespace wigi {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (!s.empty()) {
    auto bar = s.find('|');
    auto item = trim(s.substr(0, bar));
    if (!item.empty()) out.push_back(item);
    if (bar == std::string_view::npos) break;
    s.remove_prefix(bar + 1);
  }
  return out;
}

std::string property_id(std::string_view key, std::string_view value) {
  bool ok = value.size() >= 2 && value.front() == 'P' && value[1] != '0' &&
            std::all_of(value.begin() + 1, value.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (!ok) throw InputError("config key '" + std::string(key) + "': malformed property id '" +
                            std::string(value) + "'");
  return std::string(value);
}

EntityId item_id(std::string_view key, std::string_view value) {
  if (auto id = EntityId::try_parse(value)) return *id;
  throw InputError("config key '" + std::string(key) + "': malformed item id '" +
                   std::string(value) + "'");
}

struct PropertyKey {
  std::string_view key;
  std::string PropertyConfig::*field;
};

constexpr PropertyKey kPropertyKeys[] = {
    {"instance_of", &PropertyConfig::instance_of},
    {"gender", &PropertyConfig::gender},
    {"birth_date", &PropertyConfig::birth_date},
    {"death_date", &PropertyConfig::death_date},
    {"place_of_birth", &PropertyConfig::place_of_birth},
    {"citizenship", &PropertyConfig::citizenship},
    {"ethnic_group", &PropertyConfig::ethnic_group},
    {"country_of_place", &PropertyConfig::country_of_place},
};

constexpr GenderKind kNamedGenders[] = {
    GenderKind::Male,        GenderKind::Female,   GenderKind::TransgenderFemale,
    GenderKind::TransgenderMale, GenderKind::Intersex, GenderKind::Genderqueer,
    GenderKind::Faafafine,   GenderKind::Kathoey,
};

std::string join(const auto& items, auto&& to_text) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += '|';
    out += to_text(item);
  }
  return out;
}

}  // namespace

Gender PropertyConfig::map_gender(const EntityId& value) const {
  for (const auto& [kind, id] : gender_values) {
    if (id == value) return Gender::of(kind);
  }
  if (extra_nonbinary.count(value)) return Gender{GenderKind::OtherNonbinary, value};
  return Gender::of(GenderKind::Unknown);
}

bool PropertyConfig::is_wikipedia(std::string_view code) const {
  constexpr std::string_view suffix = "wiki";
  if (code.size() <= suffix.size() || code.substr(code.size() - suffix.size()) != suffix) {
    return false;
  }
  for (char c : code) {
    if (!(std::islower(static_cast<unsigned char>(c)) || c == '_' ||
          std::isdigit(static_cast<unsigned char>(c)))) {
      return false;
    }
  }
  return sitelink_exclude.count(std::string(code)) == 0;
}

void PropertyConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto& pk : kPropertyKeys) {
    if (pk.key == key) {
      this->*pk.field = property_id(key, value);
      return;
    }
  }
  if (key == "human") {
    human = item_id(key, value);
  } else if (key == "country_values") {
    country_values.clear();
    for (auto v : split_list(value)) country_values.insert(item_id(key, v));
  } else if (key == "extra_nonbinary") {
    extra_nonbinary.clear();
    for (auto v : split_list(value)) extra_nonbinary.insert(item_id(key, v));
  } else if (key == "sitelink_exclude") {
    sitelink_exclude.clear();
    for (auto v : split_list(value)) sitelink_exclude.emplace(v);
  } else {
    for (auto kind : kNamedGenders) {
      if (key == std::string("gender.") + std::string(gender_kind_name(kind))) {
        gender_values[kind] = item_id(key, value);
        return;
      }
    }
    throw InputError("unknown property config key '" + std::string(key) + "'");
  }
}

PropertyConfig PropertyConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open property config '" + path + "'");
  PropertyConfig config;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto eq = text.find('=');
    if (eq == std::string_view::npos) throw RowError(path, row, "expected key=value");
    try {
      config.set(text.substr(0, eq), text.substr(eq + 1));
    } catch (const RowError&) {
      throw;
    } catch (const InputError& e) {
      throw RowError(path, row, e.what());
    }
  }
  return config;
}

void PropertyConfig::apply_environment() {
  for (const auto& [key, value] : to_map()) {
    std::string env = "WIGI_PROPERTY_";
    for (char c : key) env += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(env.c_str())) set(key, v);
  }
}

std::map<std::string, std::string> PropertyConfig::to_map() const {
  std::map<std::string, std::string> out;
  for (const auto& pk : kPropertyKeys) out[std::string(pk.key)] = this->*pk.field;
  out["human"] = human.str();
  out["country_values"] = join(country_values, [](const EntityId& id) { return id.str(); });
  out["extra_nonbinary"] = join(extra_nonbinary, [](const EntityId& id) { return id.str(); });
  out["sitelink_exclude"] = join(sitelink_exclude, [](const std::string& s) { return s; });
  for (const auto& [kind, id] : gender_values) {
    out["gender." + std::string(gender_kind_name(kind))] = id.str();
  }
  return out;
}

}  // namespace wigi
