#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "wigi/entity.hpp"

namespace wigi::culture {

/// Inglehart-Welzel cultural clusters, plus a language-only bucket for
/// constructed-language Wikipedias.
enum class Cluster : std::uint8_t {
  EnglishSpeaking,
  LatinAmerica,
  CatholicEurope,
  ProtestantEurope,
  African,
  Islamic,
  SouthAsian,
  Orthodox,
  Confucian,
  Constructed,
  Unassigned,
};

inline constexpr std::size_t kClusterCount = 11;

/// The nine world-culture clusters (no Constructed, no Unassigned).
inline constexpr std::array<Cluster, 9> kWorldCultures = {
    Cluster::EnglishSpeaking, Cluster::LatinAmerica, Cluster::CatholicEurope,
    Cluster::ProtestantEurope, Cluster::African,     Cluster::Islamic,
    Cluster::SouthAsian,      Cluster::Orthodox,     Cluster::Confucian,
};

std::string_view to_string(Cluster c);
std::optional<Cluster> parse_cluster(std::string_view name) noexcept;

class Atlas {
 public:
  /// Loads `entity_id<TAB>cluster` and `wiki_code<TAB>cluster` files.
  /// Later duplicate keys replace earlier ones and bump duplicate_count().
  static Atlas load(const std::string& entity_map_path, const std::string& language_map_path);

  void set_entity(EntityId id, Cluster c);
  void set_language(std::string code, Cluster c);

  std::optional<Cluster> entity(const EntityId& id) const;
  Cluster language(std::string_view wiki_code) const;

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t language_count() const { return languages_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }

 private:
  std::unordered_map<EntityId, Cluster> entities_;
  std::map<std::string, Cluster, std::less<>> languages_;
  std::size_t duplicates_ = 0;
};

enum class ConsensusOutcome : std::uint8_t { Unanimous, Majority, Conflicted, NoData };

std::string_view to_string(ConsensusOutcome o);

struct Consensus {
  Cluster cluster = Cluster::Unassigned;
  ConsensusOutcome outcome = ConsensusOutcome::NoData;
};

/// Combines up to three votes (absent = abstain).
Consensus combine_votes(const std::array<std::optional<Cluster>, 3>& votes);

/// Votes from derived country, citizenships and ethnic groups. A
/// multi-valued variable whose mapped members span several clusters abstains.
Consensus consensus_culture(const HumanRecord& record, const Atlas& atlas);

inline Cluster language_culture(std::string_view wiki_code, const Atlas& atlas) {
  return atlas.language(wiki_code);
}

}  // namespace wigi::culture
