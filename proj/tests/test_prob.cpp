#include <array>
#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pidkit/distribution_io.hpp"
#include "pidkit/error.hpp"
#include "pidkit/gates.hpp"
#include "pidkit/prob.hpp"

using namespace pidkit;

namespace {

JointDistribution coin_pair() {
  return JointDistribution(2, 1,
                           {{{{"0", "0"}, {"0"}, {}}, Rational(1, 4)},
                            {{{"0", "1"}, {"1"}, {}}, Rational(1, 4)},
                            {{{"1", "0"}, {"1"}, {}}, Rational(1, 4)},
                            {{{"1", "1"}, {"0"}, {}}, Rational(1, 4)}});
}

const std::array<Var, 1> S1{Var::source(1)};
const std::array<Var, 1> S2{Var::source(2)};
const std::array<Var, 1> T1{Var::target(1)};

}  // namespace

TEST_CASE("construction validates the table") {
  using O = Outcome;
  CHECK_THROWS_CONTAINING(InputError, JointDistribution(2, 1, {{O{{"0", "0"}, {"0"}, {}}, Rational(1, 2)}}),
                          "sum to 1/2");
  CHECK_THROWS_CONTAINING(InputError, JointDistribution(2, 1, {{O{{"0"}, {"0"}, {}}, Rational(1)}}),
                          "source values");
  CHECK_THROWS_CONTAINING(InputError,
                          JointDistribution(1, 1, {{O{{"0"}, {"0"}, {}}, Rational(1, 2)},
                                                   {O{{"0"}, {"0"}, {}}, Rational(1, 2)}}),
                          "duplicate");
  CHECK_THROWS_CONTAINING(InputError,
                          JointDistribution(1, 1, {{O{{"0"}, {"0"}, {}}, Rational(3, 2)},
                                                   {O{{"1"}, {"0"}, {}}, Rational(-1, 2)}}),
                          "outside [0,1]");
  CHECK_THROWS_CONTAINING(InputError,
                          JointDistribution(1, 1, {{O{{"0"}, {"0"}, {"a"}}, Rational(1, 2)},
                                                   {O{{"1"}, {"0"}, {}}, Rational(1, 2)}}),
                          "aux");
  CHECK_THROWS_AS(JointDistribution(6, 1, {{O{{"0", "0", "0", "0", "0", "0"}, {"0"}, {}}, Rational(1)}}),
                  InputError);
  CHECK_THROWS_AS(JointDistribution(1, 1, {}), InputError);
}

TEST_CASE("zero-probability rows are ignored by functionals and the digest") {
  using O = Outcome;
  const JointDistribution with_zero(1, 1, {{O{{"0"}, {"0"}, {}}, Rational(1, 2)},
                                           {O{{"1"}, {"1"}, {}}, Rational(1, 2)},
                                           {O{{"2"}, {"1"}, {}}, Rational(0)}});
  const JointDistribution without(1, 1, {{O{{"0"}, {"0"}, {}}, Rational(1, 2)},
                                         {O{{"1"}, {"1"}, {}}, Rational(1, 2)}});
  CHECK(with_zero.digest() == without.digest());
  CHECK(entropy(with_zero, S1) == 1.0);
  CHECK(mutual_information(with_zero, S1, T1) == 1.0);
  CHECK(support_of(with_zero, Var::source(1)).size() == 2);
}

TEST_CASE("row order does not matter") {
  using O = Outcome;
  const JointDistribution a(1, 1, {{O{{"0"}, {"0"}, {}}, Rational(1, 3)}, {O{{"1"}, {"1"}, {}}, Rational(2, 3)}});
  const JointDistribution b(1, 1, {{O{{"1"}, {"1"}, {}}, Rational(2, 3)}, {O{{"0"}, {"0"}, {}}, Rational(1, 3)}});
  CHECK(a == b);
  CHECK(a.digest() == b.digest());
  CHECK(a.digest().size() == 64);
}

TEST_CASE("entropy and mutual information on the XOR gate") {
  const auto d = coin_pair();
  const std::array<Var, 2> both{Var::source(1), Var::source(2)};
  CHECK(entropy(d, both) == 2.0);
  CHECK(mutual_information(d, S1, T1) == 0.0);
  CHECK(mutual_information(d, both, T1) == 1.0);
  CHECK(conditional_mutual_information(d, S1, T1, S2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(conditional_entropy(d, T1, both) == doctest::Approx(0.0));
  CHECK(marginal_mi(d, SourceSet()) == 0.0);
}

TEST_CASE("mutual information agrees with the textbook oracle on random distributions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const auto d = oracle::random_distribution(rng, n, 1, 3, 10);
    const auto tab = oracle::from(d);
    for (const auto a : nonempty_subsets(n)) {
      CHECK(marginal_mi(d, a) == doctest::Approx(oracle::mi(tab, a.bits())).epsilon(1e-12));
    }
  }
}

TEST_CASE("chain rule I(S1,S2;T) = I(S1;T) + I(S2;T|S1)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = oracle::random_distribution(rng, 2, 1, 3, 9);
    const std::array<Var, 2> both{Var::source(1), Var::source(2)};
    const double lhs = mutual_information(d, both, T1);
    const double rhs = mutual_information(d, S1, T1) + conditional_mutual_information(d, S2, T1, S1);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    CHECK(mutual_information(d, S1, S2) >= -1e-15);
    CHECK(mutual_information(d, S1, S2) == doctest::Approx(mutual_information(d, S2, S1)));
  }
}

TEST_CASE("condition_on") {
  const auto d = coin_pair();
  const auto c = condition_on(d, Var::source(1), "1");
  CHECK(c.outcomes().size() == 2);
  CHECK(entropy(c, S1) == 0.0);
  CHECK(mutual_information(c, S2, T1) == 1.0);
  CHECK_THROWS_CONTAINING(Error, condition_on(d, Var::source(1), "7"), "conditioning on null event");

  using O = Outcome;
  const JointDistribution with_aux(1, 1, {{O{{"0"}, {"0"}, {"a"}}, Rational(1, 2)},
                                          {O{{"1"}, {"1"}, {"b"}}, Rational(1, 2)}});
  const auto ca = condition_on(with_aux, Var::aux(), "a");
  CHECK_FALSE(ca.has_aux());
  CHECK(ca.outcomes().size() == 1);
}

TEST_CASE("retarget and select_sources merge rows") {
  const auto d = make_gate("xor_source_copy");
  const std::array<Var, 2> pair{Var::source(1), Var::source(2)};
  const auto r = retarget(d, pair);
  CHECK(r.target_arity() == 2);
  CHECK(r.n_sources() == 3);
  CHECK(r.outcomes().size() == 4);

  const auto s = select_sources(d, SourceSet::of({1, 3}));
  CHECK(s.n_sources() == 2);
  CHECK(s.outcomes().size() == 4);
  CHECK(mutual_information(s, S1, S2) == 0.0);

  const std::array<Var, 1> s3{Var::source(3)};
  const auto xor_only = select_sources(retarget(d, s3), SourceSet::of({1, 2}));
  CHECK(xor_only == make_gate("xor"));
  CHECK_THROWS_AS(select_sources(d, SourceSet::of({4})), Error);
}

TEST_CASE("reencode and invert round-trip") {
  const auto d = make_gate("and");
  Reencoding r;
  r.sources = {SymbolMap{{"0", "b"}, {"1", "a"}}, std::nullopt};
  r.target = TupleMap{{{"0"}, {"no", "x"}}, {{"1"}, {"yes", "x"}}};
  const auto e = reencode(d, r);
  CHECK(e.target_arity() == 2);
  CHECK(reencode(e, invert(r)) == d);
  const std::array<Var, 2> both{Var::source(1), Var::source(2)};
  CHECK(mutual_information(e, both, target_vars(e)) == doctest::Approx(mutual_information(d, both, T1)));

  Reencoding collapse;
  collapse.sources = {SymbolMap{{"0", "a"}, {"1", "a"}}};
  CHECK_THROWS_CONTAINING(Error, reencode(d, collapse), "not invertible");
  Reencoding partial;
  partial.sources = {SymbolMap{{"0", "a"}}};
  CHECK_THROWS_CONTAINING(Error, reencode(d, partial), "whole support");
  Reencoding mixed;
  mixed.target = TupleMap{{{"0"}, {"a"}}, {{"1"}, {"b", "c"}}};
  CHECK_THROWS_CONTAINING(Error, reencode(d, mixed), "mixed arity");
}

TEST_CASE("JSON round trip keeps exact probabilities and symbol types") {
  const auto text = R"({"n_sources": 2, "target_arity": 1, "outcomes": [
      {"s": [0, "a"], "t": [1], "p": "0.1"},
      {"s": [1, "b"], "t": [0], "z": 3, "p": "9/10"}]})";
  CHECK_THROWS_CONTAINING(InputError, parse_distribution(text), "aux");

  const auto ok = R"({"n_sources": 2, "target_arity": 1, "outcomes": [
      {"s": [0, "a"], "t": [1], "p": "0.1"},
      {"s": [1, "b"], "t": [0], "p": "9/10"}]})";
  const auto d = parse_distribution(ok);
  CHECK(d.outcomes()[0].p == Rational(1, 10));
  const auto j = distribution_to_json(d);
  CHECK(j["outcomes"][0]["s"][0].is_number_integer());
  CHECK(j["outcomes"][0]["s"][1].is_string());
  CHECK(parse_distribution(j.dump()) == d);

  const auto path = std::filesystem::temp_directory_path() / "pidkit_roundtrip.json";
  save_distribution(d, path);
  CHECK(load_distribution(path) == d);
  std::filesystem::remove(path);
}

TEST_CASE("JSON errors carry context") {
  CHECK_THROWS_CONTAINING(InputError, parse_distribution("{"), "JSON parse error");
  CHECK_THROWS_CONTAINING(InputError, parse_distribution(R"({"target_arity": 1, "outcomes": []})"),
                          "n_sources");
  CHECK_THROWS_CONTAINING(InputError,
                          parse_distribution(R"({"n_sources": 1, "target_arity": 1, "outcomes": [{"s": [0]}]})"),
                          "outcome 0");
  CHECK_THROWS_CONTAINING(
      InputError,
      parse_distribution(R"({"n_sources": 1, "target_arity": 1, "outcomes": [{"s": [0], "t": [0], "p": 0.5}]})"),
      "'p' must be a string");
  CHECK_THROWS_CONTAINING(
      InputError,
      parse_distribution(R"({"n_sources": 1, "target_arity": 1, "outcomes": [{"s": [0], "t": [0], "p": "x"}]})"),
      "malformed number");
  CHECK_THROWS_CONTAINING(InputError, load_distribution("/nonexistent/pidkit.json"), "cannot open");
}
