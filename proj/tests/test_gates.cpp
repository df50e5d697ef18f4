#include <array>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pidkit/error.hpp"
#include "pidkit/gates.hpp"
#include "pidkit/prob.hpp"

using namespace pidkit;

namespace {

double h2(double q) { return -q * std::log2(q) - (1 - q) * std::log2(1 - q); }

}  // namespace

TEST_CASE("gate parsing") {
  CHECK(GateSpec::parse("xor").kind == GateSpec::Kind::xor_gate);
  CHECK(GateSpec::parse("noisy_xor:1/10").parameter == Rational(1, 10));
  CHECK(GateSpec::parse("corr_copy:0.75").parameter == Rational(3, 4));
  CHECK(GateSpec::parse("noisy_xor:1/10").name() == "noisy_xor:1/10");
  CHECK_THROWS_CONTAINING(InputError, GateSpec::parse("nand"), "unknown gate");
  CHECK_THROWS_AS(GateSpec::parse("noisy_xor:3/2"), InputError);
  CHECK_THROWS_AS(GateSpec::parse("noisy_xor"), InputError);
  CHECK_THROWS_AS(GateSpec::parse("xor:1/2"), InputError);
  CHECK(gate_ids().size() == 6);
  CHECK(gate_corpus().size() == 6);
}

TEST_CASE("information content of the canonical gates") {
  const auto x = make_gate("xor");
  CHECK(marginal_mi(x, SourceSet::of({1})) == 0.0);
  CHECK(marginal_mi(x, SourceSet::of({1, 2})) == 1.0);

  const auto a = make_gate("and");
  CHECK(marginal_mi(a, SourceSet::of({1, 2})) == doctest::Approx(h2(0.25)).epsilon(1e-14));

  const auto c = make_gate("copy2");
  CHECK(c.target_arity() == 2);
  CHECK(marginal_mi(c, SourceSet::of({1})) == 1.0);
  CHECK(marginal_mi(c, SourceSet::of({1, 2})) == 2.0);

  const auto nx = make_gate("noisy_xor:1/10");
  CHECK(marginal_mi(nx, SourceSet::of({1, 2})) == doctest::Approx(1.0 - h2(0.1)).epsilon(1e-14));
  CHECK(std::abs(marginal_mi(nx, SourceSet::of({2}))) < 1e-15);

  const auto cc = make_gate("corr_copy:3/4");
  const std::array<Var, 1> s1{Var::source(1)}, s2{Var::source(2)};
  CHECK(mutual_information(cc, s1, s2) == doctest::Approx(1.0 - h2(0.75)).epsilon(1e-14));
  CHECK(make_gate("corr_copy:1/2") == make_gate("copy2"));
}

TEST_CASE("XOR-Source-Copy gate") {
  const auto d = make_gate("xor_source_copy");
  CHECK(d.n_sources() == 3);
  CHECK(d.target_arity() == 3);
  CHECK(d.outcomes().size() == 4);
  for (int i = 1; i <= 3; ++i) {
    CHECK(std::abs(marginal_mi(d, SourceSet::of({i})) - 1.0) <= 1e-12);
    for (int j = i + 1; j <= 3; ++j) {
      const std::array<Var, 1> si{Var::source(i)}, sj{Var::source(j)};
      CHECK(mutual_information(d, si, sj) == 0.0);
      CHECK(marginal_mi(d, SourceSet::of({i, j})) == 2.0);
    }
  }
  CHECK(std::abs(marginal_mi(d, SourceSet::full(3)) - 2.0) <= 1e-12);
  for (const auto& [o, p] : d.outcomes()) {
    CHECK(p == Rational(1, 4));
    CHECK(o.target == o.sources);
  }
}

TEST_CASE("degenerate parameters only add zero rows") {
  CHECK(make_gate("noisy_xor:0").digest() == make_gate("xor").digest());
  CHECK(support_of(make_gate("corr_copy:1"), Var::source(1)).size() == 2);
  CHECK(marginal_mi(make_gate("corr_copy:1"), SourceSet::of({1, 2})) == 1.0);
}
