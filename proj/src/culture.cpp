#include "wigi/culture.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "wigi/errors.hpp"

namespace wigi::culture {

namespace {

constexpr std::array<std::string_view, kClusterCount> kNames = {
    "EnglishSpeaking", "LatinAmerica", "CatholicEurope", "ProtestantEurope",
    "African",         "Islamic",      "SouthAsian",     "Orthodox",
    "Confucian",       "Constructed",  "Unassigned",
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Calls `on_row(row, key, cluster)` for each data row of a two-column TSV.
/// Text after a '#' is a comment.
template <typename F>
void read_tsv(const std::string& path, F&& on_row) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open culture map '" + path + "'");
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::string_view text = line;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    auto tab = text.find('\t');
    if (tab == std::string_view::npos) throw RowError(path, row, "expected key<TAB>cluster");
    auto key = trim(text.substr(0, tab));
    auto name = trim(text.substr(tab + 1));
    auto cluster = parse_cluster(name);
    if (!cluster) throw RowError(path, row, "unknown cluster '" + std::string(name) + "'");
    if (*cluster == Cluster::Unassigned) throw RowError(path, row, "Unassigned is not a mapping target");
    on_row(row, key, *cluster);
  }
}

}  // namespace

std::string_view to_string(Cluster c) { return kNames[static_cast<std::size_t>(c)]; }

std::optional<Cluster> parse_cluster(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Cluster>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ConsensusOutcome o) {
  switch (o) {
    case ConsensusOutcome::Unanimous: return "unanimous";
    case ConsensusOutcome::Majority: return "majority";
    case ConsensusOutcome::Conflicted: return "conflicted";
    case ConsensusOutcome::NoData: return "no_data";
  }
  return "?";
}

Atlas Atlas::load(const std::string& entity_map_path, const std::string& language_map_path) {
  Atlas atlas;
  read_tsv(entity_map_path, [&](std::size_t row, std::string_view key, Cluster c) {
    auto id = EntityId::try_parse(key);
    if (!id) throw RowError(entity_map_path, row, "malformed entity id '" + std::string(key) + "'");
    if (c == Cluster::Constructed) {
      throw RowError(entity_map_path, row, "Constructed applies to languages only");
    }
    atlas.set_entity(*id, c);
  });
  read_tsv(language_map_path, [&](std::size_t row, std::string_view key, Cluster c) {
    if (key.size() <= 4 || key.substr(key.size() - 4) != "wiki") {
      throw RowError(language_map_path, row, "malformed wiki code '" + std::string(key) + "'");
    }
    atlas.set_language(std::string(key), c);
  });
  return atlas;
}

void Atlas::set_entity(EntityId id, Cluster c) {
  if (c == Cluster::Unassigned || c == Cluster::Constructed) {
    throw InputError("entity " + id.str() + " must map to a world culture");
  }
  auto [it, inserted] = entities_.insert_or_assign(id, c);
  if (!inserted) ++duplicates_;
}

void Atlas::set_language(std::string code, Cluster c) {
  if (c == Cluster::Unassigned) throw InputError("language " + code + " must map to a cluster");
  auto [it, inserted] = languages_.insert_or_assign(std::move(code), c);
  if (!inserted) ++duplicates_;
}

std::optional<Cluster> Atlas::entity(const EntityId& id) const {
  auto it = entities_.find(id);
  if (it == entities_.end()) return std::nullopt;
  return it->second;
}

Cluster Atlas::language(std::string_view wiki_code) const {
  auto it = languages_.find(wiki_code);
  return it == languages_.end() ? Cluster::Unassigned : it->second;
}

Consensus combine_votes(const std::array<std::optional<Cluster>, 3>& votes) {
  std::array<int, kClusterCount> tally{};
  int cast = 0;
  for (const auto& v : votes) {
    if (!v) continue;
    ++tally[static_cast<std::size_t>(*v)];
    ++cast;
  }
  if (cast == 0) return {Cluster::Unassigned, ConsensusOutcome::NoData};
  auto top = std::max_element(tally.begin(), tally.end());
  auto winner = static_cast<Cluster>(top - tally.begin());
  if (*top == cast) return {winner, ConsensusOutcome::Unanimous};
  if (2 * *top > cast) return {winner, ConsensusOutcome::Majority};
  return {Cluster::Unassigned, ConsensusOutcome::Conflicted};
}

namespace {

std::optional<Cluster> set_vote(const std::set<EntityId>& ids, const Atlas& atlas) {
  std::optional<Cluster> vote;
  for (const auto& id : ids) {
    auto c = atlas.entity(id);
    if (!c) continue;
    if (vote && *vote != *c) return std::nullopt;
    vote = c;
  }
  return vote;
}

}  // namespace

Consensus consensus_culture(const HumanRecord& record, const Atlas& atlas) {
  std::array<std::optional<Cluster>, 3> votes;
  if (record.country) votes[0] = atlas.entity(*record.country);
  votes[1] = set_vote(record.citizenships, atlas);
  votes[2] = set_vote(record.ethnic_groups, atlas);
  return combine_votes(votes);
}

}  // namespace wigi::culture
