#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pidkit/error.hpp"
#include "pidkit/properties.hpp"

using namespace pidkit;

namespace {

const IMin kImin;
const ISx kIsx;

double evidence(const PropertyReport& r, std::string_view label) {
  REQUIRE(r.witness.has_value());
  for (const auto& e : r.witness->evidence) {
    if (e.label == label) return e.value;
  }
  FAIL("missing evidence " << label);
  return 0.0;
}

// Probability of the lexicographically smallest target symbol: changes under
// relabeling whenever the target is not uniform.
struct SymbolSensitive final : RedundancyMeasure {
  std::string_view id() const override { return "symbol"; }
  double evaluate(const JointDistribution& d, std::span<const SourceSet> args) const override {
    auto support = support_of(d, Var::target(1));
    std::sort(support.begin(), support.end());
    return i_min(d, args) + to_double(support.front().second);
  }
};

std::vector<double> random_nonnegative_atoms(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.3);
  std::vector<double> out(size);
  for (auto& a : out) a = zero(rng) ? 0.0 : u(rng);
  return out;
}

}  // namespace

TEST_CASE("property and verdict names") {
  CHECK(parse_property("tcr") == PropertyId::TCR);
  CHECK(parse_property("L4") == PropertyId::L4);
  CHECK(to_string(PropertyId::REI) == "REI");
  CHECK(parse_verdict("vacuous") == Verdict::vacuous);
  CHECK_THROWS_AS(parse_property("xyz"), InputError);
  CHECK_THROWS_AS(parse_verdict("maybe"), InputError);
}

TEST_CASE("LP: I_min passes on XOR, I_sx fails with log2(2/3)") {
  const auto d = make_gate("xor");
  CHECK(check_lp(atoms_from_redundancy(d, kImin)).verdict == Verdict::pass);
  const auto r = check_lp(atoms_from_redundancy(d, kIsx));
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.witness->tuple == "{1}{2}");
  CHECK(r.witness->digest == d.digest());
  CHECK(std::abs(evidence(r, "atom") - oracle::isx(oracle::from(d), {1u, 2u})) <= 1e-12);
}

TEST_CASE("REI holds for both measures on every corpus gate") {
  for (const auto& spec : gate_corpus()) {
    const auto d = make_gate(spec);
    CAPTURE(spec.name());
    CHECK(check_rei(d, kImin, {.trials = 8, .seed = 1}).verdict == Verdict::pass);
    CHECK(check_rei(d, kIsx, {.trials = 8, .seed = 1}).verdict == Verdict::pass);
  }
}

TEST_CASE("REI catches a symbol-dependent measure") {
  const auto r = check_rei(make_gate("and"), SymbolSensitive{});
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.witness.has_value());
}

TEST_CASE("pair re-encoding map on the XOR-Source-Copy gate") {
  const auto d = make_gate("xor_source_copy");
  for (int i = 1; i <= 3; ++i) {
    for (int j = i + 1; j <= 3; ++j) {
      const auto map = pair_target_map(d, i, j);
      REQUIRE(map.has_value());
      CHECK(map->size() == 4);
    }
  }
  CHECK_FALSE(pair_target_map(make_gate("and"), 1, 2).has_value());
}

TEST_CASE("TCR: I_min fails on the XOR-Source-Copy gate, I_sx passes") {
  const auto d = make_gate("xor_source_copy");
  const auto r = check_tcr(d, kImin);
  CHECK(r.verdict == Verdict::fail);
  CHECK(check_tcr(d, kIsx).verdict == Verdict::pass);
  CHECK(check_tcr(make_gate("copy2"), kIsx).verdict == Verdict::pass);
  CHECK_THROWS_CONTAINING(Error, check_tcr(make_gate("xor"), kImin), "TCR needs a target split");
}

TEST_CASE("I_min TCR on the copy gate: 1 against 0 + 0") {
  const auto r = check_tcr(make_gate("copy2"), kImin, 1e-9);
  REQUIRE(r.verdict == Verdict::fail);
  CHECK(r.witness->tuple == "{1}{2}");
  CHECK(evidence(r, "lhs") == doctest::Approx(1.0));
  CHECK(std::abs(evidence(r, "first")) <= 1e-12);
  CHECK(std::abs(evidence(r, "second")) <= 1e-12);
  CHECK(std::abs(evidence(r, "residual") - 1.0) <= 1e-9);
}

TEST_CASE("ID and IID") {
  const auto copy = make_gate("copy2");
  const auto r = check_id(copy, kImin);
  CHECK(r.verdict == Verdict::fail);
  CHECK(evidence(r, "I_cap({1}{2};(S1,S2))") == doctest::Approx(1.0));
  CHECK(evidence(r, "I(S1;S2)") == 0.0);
  CHECK(check_id(copy, kIsx).verdict == Verdict::fail);
  CHECK(check_iid(copy, kImin).verdict == Verdict::fail);
  CHECK(check_iid(make_gate("corr_copy:3/4"), kImin).verdict == Verdict::vacuous);
  CHECK_THROWS_AS(check_id(make_gate("xor_source_copy"), kImin), Error);
}

TEST_CASE("synthetic nonnegative atoms never violate LM or the pairwise bounds") {
  std::mt19937_64 rng(37);
  const auto lattice = lattice_for(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto atoms = random_nonnegative_atoms(rng, lattice->size());
    const auto red = lattice_sum<double>(*lattice, atoms);
    CHECK(check_lm_values(*lattice, red).verdict == Verdict::pass);
    CHECK(check_pairwise_bounds(*lattice, red).verdict == Verdict::pass);
    const PidResult p(lattice, atoms, "synthetic", "");
    CHECK(check_lp_implies_lm(p).verdict == Verdict::pass);
  }
}

TEST_CASE("a negative atom above the bottom breaks LM") {
  const auto lattice = lattice_for(3);
  std::vector<double> atoms(lattice->size(), 0.0);
  atoms[lattice->index_of(Antichain::parse("{1}"))] = -0.5;
  const auto red = lattice_sum<double>(*lattice, atoms);
  const auto lm = check_lm_values(*lattice, red);
  CHECK(lm.verdict == Verdict::fail);
  CHECK(evidence(lm, "lower") > evidence(lm, "upper"));
  const PidResult p(lattice, atoms, "synthetic", "");
  CHECK(check_lp_implies_lm(p).verdict == Verdict::vacuous);
  CHECK(check_lp(p).verdict == Verdict::fail);
}

TEST_CASE("SM violations are LM violations") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = oracle::random_distribution(rng, 3, 1, 2, 8);
    for (const RedundancyMeasure* m : {static_cast<const RedundancyMeasure*>(&kImin),
                                       static_cast<const RedundancyMeasure*>(&kIsx)}) {
      const auto sm = check_sm(d, *m);
      const auto lm = check_lm(d, *m);
      if (sm.verdict == Verdict::fail) CHECK(lm.verdict == Verdict::fail);
    }
  }
  // A negative bottom atom alone does not break monotonicity.
  CHECK(check_lm(make_gate("xor"), kIsx).verdict == Verdict::pass);
  CHECK(check_sm(make_gate("xor"), kIsx).verdict == Verdict::pass);
}

TEST_CASE("positive RSI forces a positive pairwise redundancy; pairwise bounds on the XOR-Source-Copy gate") {
  const auto d = make_gate("xor_source_copy");
  const auto p = atoms_from_redundancy(d, kImin);
  CHECK(check_rsi_pairwise(p, d).verdict == Verdict::pass);
  CHECK(check_pairwise_bounds(p.lattice(), redundancy_values(d, kImin, p.lattice())).verdict == Verdict::pass);
  const auto q = atoms_from_redundancy(make_gate("and"), kImin);
  CHECK(check_rsi_pairwise(q, make_gate("and")).verdict == Verdict::vacuous);
}

TEST_CASE("the four forms of ID agree on random pair copies") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = oracle::random_pair_copy(rng, 2 + trial % 2);
    for (const RedundancyMeasure* m : {static_cast<const RedundancyMeasure*>(&kImin),
                                       static_cast<const RedundancyMeasure*>(&kIsx)}) {
      const auto r = check_lemma4_equivalents(atoms_from_redundancy(d, *m), d, 1e-9);
      CHECK(r.verdict == Verdict::pass);
    }
  }
  const auto x = make_gate("xor");
  CHECK_THROWS_AS(check_lemma4_equivalents(atoms_from_redundancy(x, kImin), x), Error);
}

TEST_CASE("C-information identities on every corpus gate") {
  for (const auto& spec : gate_corpus()) {
    const auto d = make_gate(spec);
    for (const RedundancyMeasure* m : {static_cast<const RedundancyMeasure*>(&kImin),
                                       static_cast<const RedundancyMeasure*>(&kIsx)}) {
      const auto r = c_information_identities(atoms_from_redundancy(d, *m), d, 1e-9);
      CHECK(r.ok());
      CHECK(r.max_abs_residual() <= 1e-9);
      CHECK_FALSE(r.checks.empty());
    }
  }
}

TEST_CASE("atom-level and C-information TCR agree") {
  for (const auto* id : {"copy2", "xor_source_copy", "corr_copy:3/4"}) {
    const auto d = make_gate(id);
    CHECK(check_tcr_equivalence(d, kImin).verdict == Verdict::pass);
    CHECK(check_tcr_equivalence(d, kIsx).verdict == Verdict::pass);
  }
}

TEST_CASE("theorem witness for I_min") {
  const auto w = theorem_witness(kImin);
  CHECK(w.step("RSI") == 1.0);
  CHECK(std::abs(w.step("I(S1,S2,S3;T)") - 2.0) <= 1e-12);
  for (int i = 1; i <= 3; ++i) CHECK(std::abs(w.step("I(S" + std::to_string(i) + ";T)") - 1.0) <= 1e-12);
  CHECK(w.lp.verdict == Verdict::pass);
  CHECK(w.rei.verdict == Verdict::pass);
  CHECK(w.tcr.verdict == Verdict::fail);
  CHECK(w.id.verdict == Verdict::fail);
  CHECK(w.rsi_pairwise.verdict == Verdict::pass);
  CHECK(w.pairwise_bounds.verdict == Verdict::pass);
  CHECK(w.theorem1.verdict == Verdict::pass);
  CHECK(w.theorem2.verdict == Verdict::pass);
  CHECK(w.step("TCR lhs {1}{2}") == doctest::Approx(1.0));
  CHECK(std::abs(w.step("TCR first I_cap({1}{2};S2)")) <= 1e-12);
  CHECK(std::abs(w.step("TCR second I_cap({1}{2};S1|S2)")) <= 1e-12);
  CHECK(w.conclusions.size() == 2);
  CHECK_THROWS_AS(w.step("nope"), Error);
}

TEST_CASE("theorem witness for I_sx") {
  const auto w = theorem_witness(kIsx);
  CHECK(w.lp.verdict == Verdict::fail);
  CHECK(w.rei.verdict == Verdict::pass);
  CHECK(w.tcr.verdict == Verdict::pass);
  CHECK(w.theorem2.verdict == Verdict::pass);
  CHECK(w.theorem2.note.find("LP") != std::string::npos);
  for (int i = 1; i <= 3; ++i) {
    for (int j = i + 1; j <= 3; ++j) {
      CHECK(std::abs(w.step("TCR residual {" + std::to_string(i) + "}{" + std::to_string(j) + "}")) <= 1e-9);
    }
  }
}

TEST_CASE("property matrix rows") {
  const auto corpus = gate_corpus();
  const auto imin = property_matrix_row(kImin, corpus);
  CHECK(imin.cells.at(PropertyId::LP).verdict == Verdict::pass);
  CHECK(imin.cells.at(PropertyId::TCR).verdict == Verdict::fail);
  CHECK(imin.cells.at(PropertyId::REI).verdict == Verdict::pass);
  CHECK(imin.cells.at(PropertyId::ID).verdict == Verdict::fail);
  const auto isx = property_matrix_row(kIsx, corpus);
  CHECK(isx.cells.at(PropertyId::LP).verdict == Verdict::fail);
  CHECK(isx.cells.at(PropertyId::TCR).verdict == Verdict::pass);
  CHECK(isx.cells.at(PropertyId::REI).verdict == Verdict::pass);
  CHECK(isx.cells.at(PropertyId::ID).verdict == Verdict::fail);
  CHECK(isx.cells.at(PropertyId::LP).note.find("xor") != std::string::npos);
}
