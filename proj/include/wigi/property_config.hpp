#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "wigi/entity.hpp"

namespace wigi {

/// Property and value identifiers used to classify dump entities.
/// Defaults follow current Wikidata vocabulary.
struct PropertyConfig {
  std::string instance_of = "P31";
  std::string gender = "P21";
  std::string birth_date = "P569";
  std::string death_date = "P570";
  std::string place_of_birth = "P19";
  std::string citizenship = "P27";
  std::string ethnic_group = "P172";
  std::string country_of_place = "P17";

  EntityId human{5};
  std::set<EntityId> country_values{EntityId{6256}, EntityId{3624078}};

  /// Value ids of each named gender class.
  std::map<GenderKind, EntityId> gender_values{
      {GenderKind::Male, EntityId{6581097}},
      {GenderKind::Female, EntityId{6581072}},
      {GenderKind::TransgenderFemale, EntityId{1052281}},
      {GenderKind::TransgenderMale, EntityId{2449503}},
      {GenderKind::Intersex, EntityId{1097630}},
      {GenderKind::Genderqueer, EntityId{48270}},
      {GenderKind::Faafafine, EntityId{1399232}},
      {GenderKind::Kathoey, EntityId{746411}},
  };

  /// Further gender values to treat as OtherNonbinary; anything else is Unknown.
  std::set<EntityId> extra_nonbinary;

  /// Sitelink codes ending in "wiki" that are not language Wikipedias.
  std::set<std::string> sitelink_exclude{
      "commonswiki",  "specieswiki",  "metawiki",     "mediawikiwiki",
      "wikidatawiki", "sourceswiki",  "incubatorwiki", "outreachwiki",
      "wikimaniawiki", "foundationwiki", "strategywiki", "testwiki",
      "test2wiki",    "testwikidatawiki", "loginwiki", "nostalgiawiki",
      "tenwiki",      "wikifunctionswiki",
  };

  Gender map_gender(const EntityId& value) const;

  /// True when `code` names a language Wikipedia edition.
  bool is_wikipedia(std::string_view code) const;

  /// Applies `key=value` pairs; `|` separates list values.
  /// Unknown keys and malformed ids throw InputError.
  void set(std::string_view key, std::string_view value);

  /// Reads a key/value file (`#` comments, blank lines allowed).
  static PropertyConfig load(const std::string& path);

  /// Applies WIGI_PROPERTY_<KEY> environment overrides.
  void apply_environment();

  /// All keys with their current values, for run manifests.
  std::map<std::string, std::string> to_map() const;
};

}  // namespace wigi
