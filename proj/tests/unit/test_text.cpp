#include <cmath>
#include <limits>

#include "doctest.h"
#include "netsig/rng.hpp"
#include "netsig/text.hpp"

using namespace netsig;

TEST_CASE("format_double emits the shortest exact decimal form") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-1.0) == "-1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(17.0) == "17");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("format/parse round-trips are bit exact") {
  SplitMix64 gen{7};
  for (int trial = 0; trial < 2000; ++trial) {
    double x;
    switch (trial % 4) {
      case 0:
        x = (gen.next_unit() - 0.5) * 2.0;
        break;
      case 1:
        x = (gen.next_unit() - 0.5) * 1e12;
        break;
      case 2:
        x = gen.next_unit() * 1e-300;
        break;
      default:
        x = std::ldexp(gen.next_unit(), static_cast<int>(gen.next() % 64) - 32);
        break;
    }
    auto parsed = parse_double(format_double(x));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == x);
  }
}

TEST_CASE("parse_double is strict about trailing garbage") {
  CHECK(parse_double("1.5").has_value());
  CHECK(parse_double("-2e-3").has_value());
  CHECK_FALSE(parse_double("1.5x").has_value());
  CHECK_FALSE(parse_double("").has_value());
  CHECK_FALSE(parse_double("--1").has_value());
  CHECK_FALSE(parse_double("1,5").has_value());
}

TEST_CASE("trim strips ascii whitespace on both sides") {
  CHECK(trim("  a b \t") == "a b");
  CHECK(trim("\r\n") == "");
  CHECK(trim("x") == "x");
}

TEST_CASE("split_lines handles CRLF and trailing newline") {
  auto lines = split_lines("a\r\nb\nc\n");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "a");
  CHECK(lines[1] == "b");
  CHECK(lines[2] == "c");

  auto no_trailing = split_lines("a\nb");
  REQUIRE(no_trailing.size() == 2);
  CHECK(no_trailing[1] == "b");
}

TEST_CASE("split_fields keeps empty fields") {
  auto fields = split_fields("a,,b,");
  REQUIRE(fields.size() == 4);
  CHECK(fields[0] == "a");
  CHECK(fields[1] == "");
  CHECK(fields[2] == "b");
  CHECK(fields[3] == "");
}

TEST_CASE("fnv1a64 matches the reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex16(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}
