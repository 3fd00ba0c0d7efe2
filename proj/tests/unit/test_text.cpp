#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "strip_cases.hpp"
#include "synth.hpp"
#include "wigi/celebrity.hpp"
#include "wigi/errors.hpp"
#include "wigi/wikitext.hpp"

using namespace wigi;
using namespace wigi::celebrity;

namespace {

HumanRecord person(std::uint64_t id, GenderKind g, std::int64_t born, std::set<std::string> links) {
  HumanRecord r;
  r.id = EntityId{id};
  r.gender = Gender::of(g);
  r.birth = YearValue{born, DatePrecision::Year};
  r.sitelinks = std::move(links);
  return r;
}

}  // namespace

TEST_CASE("strip golden cases") {
  for (const auto& c : testing::kStripCases) {
    CAPTURE(c.raw);
    auto s = strip_wikitext(c.raw);
    CHECK(s.text == c.text);
    CHECK(strip_wikitext(s.text).text == s.text);
  }
}

TEST_CASE("unclosed constructs are flagged") {
  CHECK(strip_wikitext("Intro {{Infobox|a=1").unbalanced);
  CHECK(strip_wikitext("Intro <ref>dangling").unbalanced);
  CHECK(strip_wikitext("Intro <!-- dangling").unbalanced);
  CHECK(strip_wikitext("Intro {{Infobox|a=1").text == "Intro");
  CHECK_FALSE(strip_wikitext("{{a}} fine").unbalanced);
}

TEST_CASE("celebrity window counts scalar values") {
  const std::vector<std::string> terms{"actress"};
  CHECK(is_celebrity(std::string(199, 'x') + "actress", terms, 200));
  CHECK_FALSE(is_celebrity(std::string(200, 'x') + "actress", terms, 200));
  // Two-byte characters count once each.
  std::string umlauts;
  for (int i = 0; i < 199; ++i) umlauts += "\xc3\xa4";
  CHECK(is_celebrity(umlauts + "actress", terms, 200));
  CHECK_FALSE(is_celebrity(umlauts + "a" + "actress", terms, 200));
  CHECK_FALSE(is_celebrity("", terms, 200));
}

TEST_CASE("matching folds case outside ASCII") {
  CHECK(is_celebrity("Eine SÄNGERIN aus Wien", std::vector<std::string>{"Sängerin"}, 200));
  CHECK(is_celebrity("ΗΘΟΠΟΙΟ", std::vector<std::string>{"ηθοποιο"}, 200));
  CHECK(is_celebrity("АКТРИСА", std::vector<std::string>{"актриса"}, 200));
  CHECK(fold_case(U'Z') == U'z');
  CHECK(fold_case(U'一') == U'一');
  CHECK(decode_utf8("a\xff") == std::u32string{U'a', U'�'});
}

TEST_CASE("lexicon loading") {
  auto dir = testing::scratch_dir("lexicon");
  std::ofstream(dir / "ok.txt") << "# terms\n[enwiki]\nactor\nsinger\n\n[dewiki]\nSchauspieler\n";
  auto lex = Lexicon::load((dir / "ok.txt").string());
  REQUIRE(lex.terms.size() == 2);
  CHECK(lex.terms[0].first == "enwiki");
  CHECK(*lex.terms_for("dewiki") == std::vector<std::string>{"Schauspieler"});
  CHECK(lex.terms_for("frwiki") == nullptr);

  std::ofstream(dir / "orphan.txt") << "actor\n[enwiki]\nx\n";
  CHECK_THROWS_AS(Lexicon::load((dir / "orphan.txt").string()), RowError);
  std::ofstream(dir / "empty.txt") << "[enwiki]\n[dewiki]\nx\n";
  CHECK_THROWS_AS(Lexicon::load((dir / "empty.txt").string()), InputError);
  CHECK_THROWS_AS(Lexicon::load((dir / "absent.txt").string()), InputError);

  auto bundled = Lexicon::load(WIGI_DATA_DIR "/celebrity_terms.txt");
  for (const char* w : {"dewiki", "enwiki", "jawiki", "kowiki", "tlwiki", "urwiki", "zhwiki"}) {
    CHECK(bundled.terms_for(w) != nullptr);
  }
}

TEST_CASE("title file names") {
  CHECK(title_filename("Ada Lovelace") == "Ada_Lovelace");
  CHECK(title_filename("AC/DC") == "AC%2FDC");
  CHECK(title_filename(".hidden") == "%2Ehidden");
  CHECK(title_filename("100%") == "100%25");
  CHECK(title_filename("a.b") == "a.b");
}

TEST_CASE("directory corpus and observations") {
  auto dir = testing::scratch_dir("corpus");
  std::filesystem::create_directories(dir / "enwiki");
  std::filesystem::create_directories(dir / "dewiki");
  std::ofstream(dir / "enwiki" / "Ann_A.txt") << "{{Infobox}}'''Ann''' is an [[actor|actress]].";
  std::ofstream(dir / "dewiki" / "Bob_B.txt") << "Bob ist ein Physiker.";
  DirectoryCorpus corpus(dir.string());
  CHECK(corpus.text("enwiki", "Ann A"));
  CHECK_FALSE(corpus.text("enwiki", "Nobody"));

  Lexicon lex;
  lex.terms = {{"dewiki", {"Schauspieler"}}, {"enwiki", {"actress"}}};
  std::vector<HumanRecord> rs{
      person(3, GenderKind::Male, 1950, {"dewiki"}),
      person(1, GenderKind::Female, 1941, {"dewiki", "enwiki"}),
      person(2, GenderKind::Female, 1900, {"enwiki"}),
      person(4, GenderKind::OtherNonbinary, 1950, {"enwiki"}),
      person(5, GenderKind::Male, 1950, {"frwiki"}),
      person(6, GenderKind::Male, 1960, {"enwiki"}),
      person(7, GenderKind::Male, 1960, {"dewiki"}),
  };
  std::vector<SitelinkTitle> titles{{EntityId{1}, "enwiki", "Ann A"},
                                    {EntityId{3}, "dewiki", "Bob B"},
                                    {EntityId{7}, "dewiki", "Gone"}};
  auto rep = build_observations(rs, titles, corpus, lex);
  REQUIRE(rep.observations.size() == 2);
  CHECK(rep.observations[0].id == EntityId{1});
  CHECK(rep.observations[0].wiki == "enwiki");
  CHECK(rep.observations[0].birth_decade == 1940);
  CHECK(rep.observations[0].is_celebrity);
  CHECK_FALSE(rep.observations[1].is_celebrity);
  CHECK(rep.missing_title == 1);
  CHECK(rep.missing_text == 1);
}

TEST_CASE("celebrity regression design") {
  std::vector<Observation> obs;
  std::uint64_t id = 1;
  for (const char* w : {"dewiki", "enwiki", "jawiki"}) {
    for (int i = 0; i < 40; ++i) {
      Observation o;
      o.id = EntityId{id++};
      o.wiki = w;
      o.gender = Gender::of(i % 2 ? GenderKind::Female : GenderKind::Male);
      o.birth_decade = 1930 + 10 * (i % 6);
      o.is_celebrity = (i % 5 == 0) || (i % 7 == 1);
      obs.push_back(o);
    }
  }
  auto fit = celebrity_regression(obs);
  CHECK(fit.names == std::vector<std::string>{"enwiki", "jawiki", "female", "decade", "intercept"});
  auto fallback = celebrity_regression(obs, "xxwiki");
  CHECK(fallback.names.front() == "enwiki");
  std::vector<Observation> one_wiki(obs.begin(), obs.begin() + 40);
  CHECK_THROWS_AS(celebrity_regression(one_wiki), DomainError);
}
