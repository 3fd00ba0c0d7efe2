#include <doctest.h>

#include <fstream>
#include <sstream>

#include "synth.hpp"
#include "wigi/errors.hpp"
#include "wigi/ingest.hpp"
#include "wigi/records_io.hpp"

using namespace wigi;
using namespace wigi::ingest;

namespace {

std::string item_claim(const std::string& q, const std::string& rank = "normal") {
  return R"({"mainsnak":{"snaktype":"value","datavalue":{"value":{"entity-type":"item","id":")" + q +
         R"("},"type":"wikibase-entityid"}},"rank":")" + rank + "\"}";
}

std::string time_claim(const std::string& t, int precision) {
  return R"({"mainsnak":{"snaktype":"value","datavalue":{"value":{"time":")" + t +
         R"(","precision":)" + std::to_string(precision) + R"(},"type":"time"}},"rank":"normal"})";
}

std::string entity(const std::string& id, const std::string& claims, const std::string& extra = "") {
  return R"({"type":"item","id":")" + id + R"(","claims":{)" + claims + "}" + extra + "}";
}

struct Collect : RecordSink {
  void on_human(HumanRecord&& r, std::vector<SitelinkTitle>&& t) override {
    humans.push_back(std::move(r));
    for (auto& x : t) titles.push_back(std::move(x));
  }
  void on_place(PlaceRecord&& p) override { places[p.id] = p; }
  std::vector<HumanRecord> humans;
  std::vector<SitelinkTitle> titles;
  PlaceIndex places;
};

const PropertyConfig kConfig;

}  // namespace

TEST_CASE("female human maps directly") {
  auto c = classify_entity(entity("Q1", R"("P31":[)" + item_claim("Q5") + R"(],"P21":[)" +
                                           item_claim("Q6581072") + "]"),
                           kConfig);
  REQUIRE(std::holds_alternative<HumanEntity>(c));
  CHECK(std::get<HumanEntity>(c).record.gender.kind == GenderKind::Female);
}

TEST_CASE("country entity is a place") {
  auto c = classify_entity(entity("Q183", R"("P31":[)" + item_claim("Q6256") + "]"), kConfig);
  REQUIRE(std::holds_alternative<PlaceRecord>(c));
  CHECK(std::get<PlaceRecord>(c).is_country);
}

TEST_CASE("city with a country claim is a place; other items are skipped") {
  auto city = classify_entity(entity("Q64", R"("P31":[)" + item_claim("Q515") + R"(],"P17":[)" +
                                              item_claim("Q183") + "]"),
                              kConfig);
  REQUIRE(std::holds_alternative<PlaceRecord>(city));
  CHECK_FALSE(std::get<PlaceRecord>(city).is_country);
  CHECK(std::get<PlaceRecord>(city).containing_country == EntityId{183});
  CHECK(std::holds_alternative<Skipped>(classify_entity(entity("Q9", R"("P31":[)" + item_claim("Q11424") + "]"),
                                                       kConfig)));
  CHECK(std::holds_alternative<Skipped>(classify_entity(R"({"type":"property","id":"P31","claims":{}})", kConfig)));
  CHECK(std::holds_alternative<Skipped>(classify_entity(R"({"type":"item","id":"Q3","claims":[]})", kConfig)));
}

TEST_CASE("malformed entities") {
  CHECK(std::holds_alternative<Malformed>(classify_entity("{\"id\":\"Q1\",", kConfig)));
  CHECK(std::holds_alternative<Malformed>(classify_entity("[1,2]", kConfig)));
  CHECK(std::holds_alternative<Malformed>(classify_entity(R"({"claims":{}})", kConfig)));
  CHECK(std::holds_alternative<Malformed>(classify_entity(R"({"id":"Qx","claims":{}})", kConfig)));
  CHECK(std::holds_alternative<Malformed>(
      classify_entity(R"({"id":"Q1","claims":{"P31":[{"mainsnak":{"snaktype":"value"}}]}})", kConfig)));
}

TEST_CASE("rank handling for gender") {
  auto human = [&](const std::string& gender_claims) {
    auto c = classify_entity(entity("Q1", R"("P31":[)" + item_claim("Q5") + R"(],"P21":[)" + gender_claims + "]"),
                             kConfig);
    return std::get<HumanEntity>(c);
  };
  auto preferred = human(item_claim("Q6581097") + "," + item_claim("Q6581072", "preferred"));
  CHECK(preferred.record.gender.kind == GenderKind::Female);
  CHECK_FALSE(preferred.gender_conflict);

  auto deprecated = human(item_claim("Q6581072", "deprecated") + "," + item_claim("Q6581097"));
  CHECK(deprecated.record.gender.kind == GenderKind::Male);

  auto tie = human(item_claim("Q6581097") + "," + item_claim("Q6581072"));
  CHECK(tie.record.gender.kind == GenderKind::Male);
  CHECK(tie.gender_conflict);

  auto same = human(item_claim("Q6581097") + "," + item_claim("Q6581097"));
  CHECK_FALSE(same.gender_conflict);

  auto only_deprecated = human(item_claim("Q6581072", "deprecated"));
  CHECK(only_deprecated.record.gender.kind == GenderKind::Unknown);

  auto unmapped = human(item_claim("Q4"));
  CHECK(unmapped.record.gender.kind == GenderKind::Unknown);
}

TEST_CASE("dates: signed years and precision") {
  auto born = [&](const std::string& t, int p) {
    auto c = classify_entity(entity("Q1", R"("P31":[)" + item_claim("Q5") + R"(],"P569":[)" + time_claim(t, p) + "]"),
                             kConfig);
    return std::get<HumanEntity>(c);
  };
  CHECK(born("+1952-03-11T00:00:00Z", 11).record.birth == YearValue{1952, DatePrecision::Year});
  CHECK(born("+1952-00-00T00:00:00Z", 9).record.birth == YearValue{1952, DatePrecision::Year});
  CHECK(born("-0044-03-15T00:00:00Z", 11).record.birth == YearValue{-43, DatePrecision::Year});
  CHECK(born("-0001-01-01T00:00:00Z", 9).record.birth == YearValue{0, DatePrecision::Year});
  auto decade = born("+1950-00-00T00:00:00Z", 8);
  CHECK(decade.record.birth == YearValue{1950, DatePrecision::Decade});
  CHECK(decade.coarse_dates == 1);
  CHECK(born("+1800-00-00T00:00:00Z", 7).record.birth->precision == DatePrecision::Century);
  CHECK(born("-10000-00-00T00:00:00Z", 3).record.birth->precision == DatePrecision::Coarser);
}

TEST_CASE("multi-valued claims and sitelinks") {
  auto c = classify_entity(
      entity("Q1",
             R"("P31":[)" + item_claim("Q5") + R"(],"P27":[)" + item_claim("Q30") + "," + item_claim("Q183") + "," +
                 item_claim("Q145", "deprecated") + R"(],"P172":[)" + item_claim("Q7") + "]",
             R"(,"sitelinks":{"enwiki":{"site":"enwiki","title":"A B"},"commonswiki":{"title":"C"},"enwikiquote":{"title":"D"}})"),
      kConfig);
  auto h = std::get<HumanEntity>(c);
  CHECK(h.record.citizenships == std::set<EntityId>{EntityId{30}, EntityId{183}});
  CHECK(h.record.ethnic_groups == std::set<EntityId>{EntityId{7}});
  CHECK(h.record.sitelinks == std::set<std::string>{"enwiki"});
  REQUIRE(h.titles.size() == 1);
  CHECK(h.titles[0].title == "A B");
}

TEST_CASE("stream records malformed lines and keeps going") {
  std::string dump = "[\n" + entity("Q1", R"("P31":[)" + item_claim("Q5") + "]") + ",\n{broken\n" +
                     entity("Q2", R"("P31":[)" + item_claim("Q5") + "]") + "\n]\n";
  std::istringstream in(dump);
  Collect sink;
  auto stats = stream_entities(in, kConfig, sink);
  CHECK(stats.humans == 2);
  CHECK(stats.malformed == 1);
  CHECK(stats.malformed_lines == std::vector<std::uint64_t>{3});

  std::istringstream again(dump);
  Collect sink2;
  try {
    stream_entities(again, kConfig, sink2, StreamOptions{true, 1, 512});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("non-UTF-8 input aborts with the byte offset") {
  std::string dump = "[\n{\"id\":\"Q1\"}\n{\"id\":\"Q\xff\"}\n";
  std::istringstream in(dump);
  Collect sink;
  try {
    stream_entities(in, kConfig, sink);
    FAIL("expected Utf8Error");
  } catch (const Utf8Error& e) {
    CHECK(e.offset() == dump.find('\xff'));
  }
  CHECK(find_invalid_utf8("ok \xc3\xa9") == std::nullopt);
  CHECK(find_invalid_utf8("\xc0\x80") == std::optional<std::size_t>{0});       // overlong
  CHECK(find_invalid_utf8("ab\xed\xa0\x80") == std::optional<std::size_t>{2});  // surrogate
  CHECK(find_invalid_utf8("\xe2\x82") == std::optional<std::size_t>{0});        // truncated
}

TEST_CASE("country resolution is one hop and sees places listed after humans") {
  std::string dump = entity("Q1", R"("P31":[)" + item_claim("Q5") + R"(],"P19":[)" + item_claim("Q64") + "]") + "\n" +
                     entity("Q2", R"("P31":[)" + item_claim("Q5") + R"(],"P19":[)" + item_claim("Q183") + "]") + "\n" +
                     entity("Q3", R"("P31":[)" + item_claim("Q5") + R"(],"P19":[)" + item_claim("Q99") + "]") + "\n" +
                     entity("Q64", R"("P31":[)" + item_claim("Q515") + R"(],"P17":[)" + item_claim("Q183") + "]") + "\n" +
                     entity("Q99", R"("P31":[)" + item_claim("Q1549591") + R"(],"P131":[)" + item_claim("Q64") + "]") +
                     "\n" + entity("Q183", R"("P31":[)" + item_claim("Q6256") + "]") + "\n";
  std::istringstream in(dump);
  Collect sink;
  stream_entities(in, kConfig, sink);
  REQUIRE(sink.humans.size() == 3);
  CHECK(resolve_country(sink.humans[0], sink.places) == EntityId{183});
  CHECK(resolve_country(sink.humans[1], sink.places) == EntityId{183});
  CHECK(resolve_country(sink.humans[2], sink.places) == std::nullopt);
}

TEST_CASE("thread count does not change the emitted sequence") {
  testing::SynthDump dump({.humans = 3000, .cities = 40, .seed = 9});
  auto run = [&](unsigned threads, std::size_t batch) {
    testing::SynthStreambuf buf(dump);
    std::istream in(&buf);
    Collect sink;
    auto stats = stream_entities(in, kConfig, sink, StreamOptions{false, threads, batch});
    std::ostringstream out;
    records::write_records(sink.humans, out);
    return std::make_pair(out.str(), stats.humans);
  };
  auto one = run(1, 512);
  CHECK(one.second == 3000);
  CHECK(run(4, 7) == one);
  CHECK(run(8, 512) == one);
}

TEST_CASE("fixture dump matches the reviewed golden records") {
  std::ifstream in(WIGI_TEST_DIR "/fixtures/dump12.json", std::ios::binary);
  REQUIRE(in);
  Collect sink;
  auto stats = stream_entities(in, kConfig, sink);
  CHECK(stats.entities_seen == 12);
  CHECK(stats.humans == 8);
  CHECK(stats.places == 3);
  CHECK(stats.skipped == 1);
  for (auto& h : sink.humans) h.country = resolve_country(h, sink.places);
  std::ostringstream out;
  records::write_records(sink.humans, out);
  CHECK(out.str() == testing::read_file(WIGI_TEST_DIR "/golden/records.csv"));
}
