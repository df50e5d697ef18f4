#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pidkit/error.hpp"
#include "pidkit/rational.hpp"
#include "pidkit/source_set.hpp"

using namespace pidkit;

TEST_CASE("parse_rational accepts fractions, integers and exact decimals") {
  CHECK(parse_rational("1/4") == Rational(1, 4));
  CHECK(parse_rational(" 2/8 ") == Rational(1, 4));
  CHECK(parse_rational("1") == Rational(1));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("2.5e-1") == Rational(1, 4));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
}

TEST_CASE("parse_rational rejects malformed text") {
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), InputError);
  CHECK_THROWS_AS(parse_rational("."), InputError);
  CHECK_THROWS_AS(parse_rational("1e99999"), InputError);
}

TEST_CASE("to_string is canonical") {
  CHECK(to_string(Rational(2, 4)) == "1/2");
  CHECK(to_string(Rational(3)) == "3/1");
}

TEST_CASE("log2_of is exact on powers of two and close elsewhere") {
  CHECK(log2_of(Rational(1, 1024)) == -10.0);
  CHECK(log2_of(Rational(8)) == 3.0);
  CHECK(std::abs(log2_of(Rational(2, 3)) - std::log2(2.0 / 3.0)) < 1e-15);
  // far outside double range
  mpz_class big = 1;
  big <<= 5000;
  CHECK(log2_of(Rational(big, 3)) == doctest::Approx(5000 - std::log2(3.0)));
}

TEST_CASE("SourceSet basics") {
  const auto a = SourceSet::of({1, 3});
  CHECK(a.bits() == 0b101u);
  CHECK(a.size() == 2);
  CHECK(a.contains(3));
  CHECK_FALSE(a.contains(2));
  CHECK(a.to_string() == "{1,3}");
  CHECK(SourceSet().to_string() == "{}");
  CHECK(SourceSet::of({1}).subset_of(a));
  CHECK((SourceSet::of({1}) | SourceSet::of({2})) == SourceSet::of({1, 2}));
  CHECK(SourceSet::full(3).indices() == std::vector<int>{1, 2, 3});
}

TEST_CASE("SourceSet order is lexicographic on index lists") {
  CHECK(SourceSet::of({1}) < SourceSet::of({1, 2}));
  CHECK(SourceSet::of({1, 2}) < SourceSet::of({2}));
  CHECK(SourceSet::of({1, 3}) < SourceSet::of({2}));
}

TEST_CASE("subset enumeration") {
  CHECK(all_subsets(3).size() == 8);
  CHECK(nonempty_subsets(3).size() == 7);
  const std::vector<SourceSet> t{SourceSet::of({2}), SourceSet::of({1, 3})};
  CHECK(tuple_to_string(t) == "{2}{1,3}");
}
