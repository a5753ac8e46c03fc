#include "protrack/events.hpp"

#include "protrack/errors.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace protrack;

TEST_CASE("parses plain event records") {
  const auto parsed = parse_event_stream(std::string("100,3,4,1\n200,5,6,-1\n"));
  REQUIRE(parsed.records.size() == 2);
  CHECK(parsed.records[0] == EventRecord{100, 3, 4, 1});
  CHECK(parsed.records[1] == EventRecord{200, 5, 6, -1});
  CHECK(parsed.warnings.empty());
}

TEST_CASE("polarity 0 is read as OFF") {
  const auto parsed = parse_event_stream(std::string("100,3,4,0\n"));
  REQUIRE(parsed.records.size() == 1);
  CHECK(parsed.records[0].polarity == -1);
}

TEST_CASE("arity and malformed-field errors carry line numbers") {
  CHECK_THROWS_AS(parse_event_stream(std::string("100,3\n")), ParseError);
  CHECK_THROWS_AS(parse_event_stream(std::string("100,3,4,1\nx,3,4,1\n")), ParseError);
  CHECK_THROWS_AS(parse_event_stream(std::string("100,3,4,7\n")), ParseError);
  try {
    parse_event_stream(std::string("100,3,4,1\n100,3\n"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("coordinates outside the sensor are rejected") {
  CHECK_THROWS_AS(parse_event_stream(std::string("100,10,4,1\n"), 8, 8), ParseError);
  CHECK_THROWS_AS(parse_event_stream(std::string("100,3,-1,1\n")), ParseError);
  CHECK_NOTHROW(parse_event_stream(std::string("100,7,7,1\n"), 8, 8));
}

TEST_CASE("header lines are skipped, out-of-order timestamps warn") {
  const auto parsed = parse_event_stream(std::string("t,x,y,p\n200,1,1,1\n100,2,2,1\n"));
  REQUIRE(parsed.records.size() == 2);
  CHECK(parsed.records[0].t == 200);
  REQUIRE(parsed.warnings.size() == 1);
  CHECK(parsed.warnings[0].find("line 3") != std::string::npos);
}

TEST_CASE("parse then serialize reproduces a canonical stream byte for byte") {
  const std::string text = "100,3,4,1\n150,0,0,-1\n200,7,2,1\n";
  const auto parsed = parse_event_stream(text);
  CHECK(serialize_event_stream(parsed.records) == text);
}

TEST_CASE("serialize then parse is the identity on random records") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> coord(0, 63);
  std::uniform_int_distribution<int> pol(0, 1);
  std::vector<EventRecord> records;
  std::int64_t t = 0;
  for (int i = 0; i < 500; ++i) {
    t += rng() % 100;
    records.push_back({t, coord(rng), coord(rng), pol(rng) ? 1 : -1});
  }
  const auto parsed = parse_event_stream(serialize_event_stream(records));
  CHECK(parsed.records == records);
}

TEST_CASE("accumulate: empty window is all zeros") {
  const PolarityImage img = accumulate({}, 0, 100, 4, 3);
  CHECK(img.width() == 4);
  CHECK(img.height() == 3);
  CHECK((img.values == 0).all());
}

TEST_CASE("accumulate: a single ON event marks its pixel") {
  const std::vector<EventRecord> events{{50, 3, 2, 1}};
  const PolarityImage img = accumulate(events, 0, 100, 5, 5);
  CHECK(img.values(2, 3) == 1);
  CHECK(img.values.abs().sum() == 1);
}

TEST_CASE("accumulate: opposite polarities cancel per pixel") {
  const std::vector<EventRecord> events{{10, 1, 1, 1}, {20, 1, 1, -1}};
  const PolarityImage img = accumulate(events, 0, 100, 3, 3);
  CHECK(img.values(1, 1) == 0);
}

TEST_CASE("accumulate respects the half-open window") {
  const std::vector<EventRecord> events{{10, 0, 0, 1}, {20, 1, 0, 1}};
  const PolarityImage img = accumulate(events, 10, 20, 3, 1);
  CHECK(img.values(0, 0) == 1);
  CHECK(img.values(0, 1) == 0);  // t = 20 is outside [10, 20)
}

TEST_CASE("window additivity of the pre-sign sums") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coord(0, 15);
  std::uniform_int_distribution<std::int64_t> time(0, 999);
  std::uniform_int_distribution<int> pol(0, 1);
  std::vector<EventRecord> events;
  for (int i = 0; i < 2000; ++i)
    events.push_back({time(rng), coord(rng), coord(rng), pol(rng) ? 1 : -1});

  const auto total = accumulate_sum(events, 0, 1000, 16, 16);
  const auto first = accumulate_sum(events, 0, 400, 16, 16);
  const auto second = accumulate_sum(events, 400, 1000, 16, 16);
  CHECK((total == first + second).all());
  CHECK((accumulate(events, 0, 1000, 16, 16).values == total.sign()).all());
}

TEST_CASE("polarity colors: red ON, blue OFF, gray background") {
  PolarityImage img;
  img.values.setZero(2, 2);
  img.values(0, 0) = 1;
  img.values(1, 1) = -1;

  const Image out = polarity_to_color(img);
  CHECK(out.at(0, 0, 0) == 1.0);
  CHECK(out.at(0, 0, 1) == 0.0);
  CHECK(out.at(0, 0, 2) == 0.0);
  CHECK(out.at(1, 1, 0) == 0.0);
  CHECK(out.at(1, 1, 2) == 1.0);
  CHECK(out.at(0, 1, 0) == 0.5);
  CHECK(out.at(0, 1, 1) == 0.5);
  CHECK(out.at(0, 1, 2) == 0.5);

  const Image all_zero = polarity_to_color(PolarityImage{decltype(img.values)::Zero(2, 2)});
  for (int c = 0; c < 3; ++c) CHECK((all_zero.plane(c) == 0.5).all());
}

TEST_CASE("negating every polarity swaps red and blue exactly") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coord(0, 7);
  std::uniform_int_distribution<int> pol(0, 1);
  std::vector<EventRecord> events, negated;
  for (int i = 0; i < 300; ++i) {
    const EventRecord e{static_cast<std::int64_t>(i), coord(rng), coord(rng), pol(rng) ? 1 : -1};
    events.push_back(e);
    negated.push_back({e.t, e.x, e.y, -e.polarity});
  }
  const Image a = polarity_to_color(accumulate(events, 0, 1000, 8, 8));
  const Image b = polarity_to_color(accumulate(negated, 0, 1000, 8, 8));
  CHECK((a.plane(0) == b.plane(2)).all());
  CHECK((a.plane(2) == b.plane(0)).all());
  CHECK((a.plane(1) == b.plane(1)).all());
}

TEST_CASE("polarity encode maps {-1,0,1} to {0,0.5,1}") {
  PolarityImage img;
  img.values.setZero(1, 3);
  img.values(0, 0) = -1;
  img.values(0, 2) = 1;
  const Image enc = polarity_encode(img);
  CHECK(enc.at(0, 0, 0) == 0.0);
  CHECK(enc.at(0, 1, 0) == 0.5);
  CHECK(enc.at(0, 2, 0) == 1.0);
}

TEST_CASE("accumulate requires a forward window") {
  CHECK_THROWS_AS(accumulate({}, 100, 100, 2, 2), std::invalid_argument);
}
