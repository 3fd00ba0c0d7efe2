#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "synth.hpp"
#include "wigi/culture.hpp"
#include "wigi/errors.hpp"

using namespace wigi;
using namespace wigi::culture;

namespace {

std::filesystem::path write(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
  std::ofstream(dir / name) << body;
  return dir / name;
}

}  // namespace

TEST_CASE("atlas loads rows, comments and duplicates") {
  auto dir = testing::scratch_dir("atlas");
  auto e = write(dir, "e.tsv", "# header\nQ183\tProtestantEurope\nQ17\tConfucian  # Japan\nQ183\tCatholicEurope\n");
  auto l = write(dir, "l.tsv", "tlwiki\tSouthAsian\neowiki\tConstructed\n\n");
  auto atlas = Atlas::load(e.string(), l.string());
  CHECK(atlas.entity(EntityId{17}) == Cluster::Confucian);
  CHECK(atlas.entity(EntityId{183}) == Cluster::CatholicEurope);
  CHECK(atlas.duplicate_count() == 1);
  CHECK(atlas.language("tlwiki") == Cluster::SouthAsian);
  CHECK(atlas.language("eowiki") == Cluster::Constructed);
  CHECK(atlas.language("xxwiki") == Cluster::Unassigned);
  CHECK_FALSE(atlas.entity(EntityId{1}));
}

TEST_CASE("atlas rejects unknown clusters naming the row") {
  auto dir = testing::scratch_dir("atlas_bad");
  auto e = write(dir, "e.tsv", "Q1\tConfucian\nQ2\tAtlantis\n");
  auto l = write(dir, "l.tsv", "enwiki\tEnglishSpeaking\n");
  try {
    Atlas::load(e.string(), l.string());
    FAIL("expected RowError");
  } catch (const RowError& err) {
    CHECK(err.row() == 2);
  }
  auto e2 = write(dir, "e2.tsv", "Q1\tUnassigned\n");
  CHECK_THROWS_AS(Atlas::load(e2.string(), l.string()), RowError);
  auto e3 = write(dir, "e3.tsv", "Q1\tConstructed\n");
  CHECK_THROWS_AS(Atlas::load(e3.string(), l.string()), RowError);
  auto e4 = write(dir, "e4.tsv", "Q1 Confucian\n");
  CHECK_THROWS_AS(Atlas::load(e4.string(), l.string()), RowError);
}

TEST_CASE("cluster names round trip") {
  for (std::size_t i = 0; i < kClusterCount; ++i) {
    auto c = static_cast<Cluster>(i);
    CHECK(parse_cluster(to_string(c)) == c);
  }
  CHECK_FALSE(parse_cluster("Atlantis"));
}

TEST_CASE("consensus examples") {
  using V = std::array<std::optional<Cluster>, 3>;
  auto c = combine_votes(V{Cluster::Confucian, Cluster::Confucian, std::nullopt});
  CHECK(c.cluster == Cluster::Confucian);
  CHECK(c.outcome == ConsensusOutcome::Unanimous);
  c = combine_votes(V{Cluster::Islamic, Cluster::Orthodox, std::nullopt});
  CHECK(c.cluster == Cluster::Unassigned);
  CHECK(c.outcome == ConsensusOutcome::Conflicted);
  c = combine_votes(V{Cluster::Islamic, Cluster::Orthodox, Cluster::Islamic});
  CHECK(c.cluster == Cluster::Islamic);
  CHECK(c.outcome == ConsensusOutcome::Majority);
  c = combine_votes(V{});
  CHECK(c.outcome == ConsensusOutcome::NoData);
}

TEST_CASE("consensus matches the counting reference on every vote pattern") {
  std::vector<std::optional<Cluster>> options{std::nullopt};
  for (auto c : kWorldCultures) options.emplace_back(c);
  int cases = 0;
  for (const auto& a : options) {
    for (const auto& b : options) {
      for (const auto& c : options) {
        std::array<std::optional<Cluster>, 3> v{a, b, c};
        auto got = combine_votes(v);
        auto want = oracle::consensus(v);
        CHECK(got.cluster == want.cluster);
        CHECK(got.outcome == want.outcome);
        ++cases;
      }
    }
  }
  CHECK(cases == 1000);
}

TEST_CASE("a variable split across clusters abstains; permutation never matters") {
  Atlas atlas;
  atlas.set_entity(EntityId{1}, Cluster::Islamic);
  atlas.set_entity(EntityId{2}, Cluster::Islamic);
  atlas.set_entity(EntityId{3}, Cluster::Orthodox);

  HumanRecord r;
  r.country = EntityId{3};
  r.citizenships = {EntityId{1}, EntityId{2}};
  auto c = consensus_culture(r, atlas);
  CHECK(c.outcome == ConsensusOutcome::Conflicted);

  r.citizenships = {EntityId{1}, EntityId{2}, EntityId{3}};
  c = consensus_culture(r, atlas);
  CHECK(c.cluster == Cluster::Orthodox);
  CHECK(c.outcome == ConsensusOutcome::Unanimous);

  r.ethnic_groups = {EntityId{3}, EntityId{99}};
  c = consensus_culture(r, atlas);
  CHECK(c.cluster == Cluster::Orthodox);
  CHECK(c.outcome == ConsensusOutcome::Unanimous);

  // Set members are ordered by id, so shuffled inserts give equal records.
  std::mt19937 rng(3);
  std::vector<EntityId> ids{EntityId{1}, EntityId{2}, EntityId{3}, EntityId{99}};
  for (int i = 0; i < 20; ++i) {
    std::shuffle(ids.begin(), ids.end(), rng);
    HumanRecord s;
    for (auto id : ids) s.citizenships.insert(id);
    CHECK(consensus_culture(s, atlas).outcome == ConsensusOutcome::NoData);
  }
}

TEST_CASE("bundled atlas covers the documented examples") {
  auto atlas = Atlas::load(WIGI_DATA_DIR "/culture_entities.tsv", WIGI_DATA_DIR "/culture_languages.tsv");
  CHECK(language_culture("zhwiki", atlas) == Cluster::Confucian);
  CHECK(language_culture("eowiki", atlas) == Cluster::Constructed);
  CHECK(language_culture("tlwiki", atlas) == Cluster::SouthAsian);
  CHECK(language_culture("xxwiki", atlas) == Cluster::Unassigned);
  CHECK(atlas.entity(EntityId{183}) == Cluster::ProtestantEurope);
  CHECK(atlas.duplicate_count() == 0);
}
