#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "varlp/profile_spec.hpp"

using namespace varlp;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

TEST_CASE("profile kinds evaluate as described") {
  CHECK(parse_profile("const:2.5")(7.0) == 2.5);
  CHECK_THAT(parse_profile("power:-0.5")(4.0), WithinRel(0.5, 1e-15));
  CHECK_THAT(parse_profile("power:2,coeff:3")(2.0), WithinRel(12.0, 1e-15));
  const auto cut = parse_profile("power:1,cutoff:2");
  CHECK(cut(1.5) == 1.5);
  CHECK(cut(2.5) == 0.0);
  CHECK_THAT(parse_profile("power:1,cutoff:2,coeff:4")(1.5), WithinRel(6.0, 1e-15));
  CHECK_THAT(parse_profile("exp:-3")(0.5), WithinRel(std::exp(-1.5), 1e-15));
  CHECK(parse_profile("linear-x")(3.25) == 3.25);
  const auto step = parse_profile("twostep:1,2,0.5");
  CHECK(step(0.25) == 1.0);
  CHECK(step(0.75) == 2.0);
  CHECK_THAT(parse_profile("logpower:1,2")(std::exp(1.5)), WithinRel(std::exp(1.5) * 2.25, 1e-14));
  CHECK(parse_profile("  const: 1 ")(1.0) == 1.0);
}

TEST_CASE("power laws keep their closed form") {
  const auto p = parse_profile("power:-1.5,coeff:2");
  REQUIRE(p.power_law());
  CHECK(p.power_law()->exponent == -1.5);
  CHECK(p.power_law()->coeff == 2.0);
}

TEST_CASE("exponents") {
  const auto fixed = parse_exponent("2");
  REQUIRE(fixed.is_constant());
  CHECK(fixed.constant_value() == 2.0);
  CHECK(parse_exponent("const:1.5").is_constant());
  const auto lin = parse_exponent("linear-x");
  CHECK_FALSE(lin.is_constant());
  CHECK(lin(3.0) == 3.0);
  const auto step = parse_exponent("twostep:1,2,1");
  CHECK(step(0.5) == 1.0);
  CHECK(step(2.0) == 2.0);
  CHECK_THROWS_AS(parse_exponent("0"), parse_error);
  CHECK_THROWS_AS(parse_exponent("-1"), parse_error);
}

TEST_CASE("domains") {
  const auto half = parse_domain("halfline:1,inf", 1);
  CHECK(half.measure == Measure::interval);
  CHECK(half.inner == 1.0);
  CHECK(std::isinf(half.outer));
  const auto ball = parse_domain("ball:2", 3);
  CHECK(ball.dimension == 3);
  CHECK(ball.outer == 2.0);
  CHECK(ball.measure == Measure::radial);
  const auto shell = parse_domain("shell:0.5,4", 2);
  CHECK(shell.inner == 0.5);
  CHECK(shell.outer == 4.0);
  CHECK(parse_domain("interval:0,3", 1).outer == 3.0);
  CHECK(std::isinf(parse_domain("whole", 2).outer));
  for (const char* text : {"halfline:1,inf", "ball:2", "shell:0.5,4", "interval:0,3", "whole", "exterior:1.25"})
    CHECK(domain_label(parse_domain(domain_label(parse_domain(text, 2)), 2)) == domain_label(parse_domain(text, 2)));
}

TEST_CASE("malformed descriptions name the field") {
  CHECK_THROWS_WITH(parse_profile("bogus:1", "--f"), ContainsSubstring("--f") && ContainsSubstring("bogus"));
  CHECK_THROWS_AS(parse_profile("power:", "--f"), parse_error);
  CHECK_THROWS_AS(parse_profile("power:x"), parse_error);
  CHECK_THROWS_AS(parse_profile("power:1,cutof:2"), parse_error);
  CHECK_THROWS_AS(parse_profile("twostep:1,2"), parse_error);
  CHECK_THROWS_AS(parse_profile("const:1,2"), parse_error);
  CHECK_THROWS_AS(parse_profile("linear-x:3"), parse_error);
  CHECK_THROWS_AS(parse_profile("power:1,cutoff:-1"), parse_error);
  CHECK_THROWS_WITH(parse_domain("shell:3,1", 1, "--domain"), ContainsSubstring("--domain"));
  CHECK_THROWS_AS(parse_domain("disk:1", 1), parse_error);
  CHECK_THROWS_AS(parse_domain("halfline:1", 1), parse_error);
  try {
    parse_profile("exp:abc", "--w");
    FAIL("no exception");
  } catch (const parse_error& e) {
    CHECK(e.field() == "--w");
  }
}

TEST_CASE("grid files") {
  const std::string path = "varlp_grid_test.csv";
  {
    std::ofstream out(path);
    out << "# comment\nr,value\n0.5, 2\n1, 1\n2, 0.5\n4, 0.25\n";
  }
  const auto g = parse_profile("grid:" + path);
  CHECK_THAT(g(1.0), WithinRel(1.0, 1e-12));
  CHECK_THAT(g(3.0), WithinRel(1.0 / 3.0, 1e-9));  // log-log interpolation of 1/r is exact
  {
    std::ofstream out(path);
    out << "0.5 2\n1 oops\n";
  }
  CHECK_THROWS_WITH(parse_profile("grid:" + path, "--f"), ContainsSubstring(":2"));
  std::remove(path.c_str());
  CHECK_THROWS_AS(parse_profile("grid:/nonexistent/file.csv"), parse_error);
}
