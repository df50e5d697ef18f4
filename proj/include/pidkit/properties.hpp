#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pidkit/engine.hpp"
#include "pidkit/gates.hpp"
#include "pidkit/measures.hpp"

namespace pidkit {

/// LP  local positivity            REI  re-encoding invariance
/// TCR target chain rule           LM   lattice monotonicity
/// SM  source monotonicity         ID   identity property
/// IID independent identity        L1   RSI / positive pairwise redundancy
/// L2  LP implies LM               C1   pairwise redundancy upper bounds
/// L3  equivalent forms of TCR     L4   equivalent forms of ID
/// T1  LP + ID + REI inconsistency T2   LP + TCR + REI inconsistency
enum class PropertyId { LP, REI, TCR, LM, SM, ID, IID, L1, L2, C1, L3, L4, T1, T2 };
enum class Verdict { pass, fail, vacuous };

std::string_view to_string(PropertyId id);
std::string_view to_string(Verdict v);
/// Case-insensitive.
PropertyId parse_property(std::string_view text);
Verdict parse_verdict(std::string_view text);

struct Evidence {
  std::string label;
  double value = 0.0;
};

struct Witness {
  std::string digest;
  std::string tuple;  // offending argument, e.g. "{1}{2}" or "{1}{2} <= {1}"
  std::vector<Evidence> evidence;
};

/// Verdict of one property on one distribution (or a family of them).
/// A fail verdict always carries a witness; a pass records the search space.
struct PropertyReport {
  PropertyId property = PropertyId::LP;
  Verdict verdict = Verdict::pass;
  std::string measure_id;
  double tolerance = kDefaultTolerance;
  std::string search_space;
  std::optional<Witness> witness;
  std::string note;
};

PropertyReport check_lp(const PidResult& p, double tol = kDefaultTolerance);

struct ReiOptions {
  int trials = 32;
  std::uint64_t seed = 0;
  double tol = kDefaultTolerance;
  /// Every combination of permutations is also tried when there are at most this many.
  std::size_t exhaustive_limit = 4096;
};

/// Random (seeded) and, for small supports, exhaustive relabelings of every
/// source and of the joint target, plus for every source pair (i,j) whose values
/// determine the target bijectively the re-encoding T = F_ij(S_i, S_j).
PropertyReport check_rei(const JointDistribution& d, const RedundancyMeasure& m, const ReiOptions& options = {});

/// If the target is a bijective function of (S_i, S_j) on the support, the table
/// (s_i, s_j) -> t; otherwise nullopt.
std::optional<TupleMap> pair_target_map(const JointDistribution& d, int i, int j);

/// I_∩(α;T) against I_∩(α;T_1) + I_∩(α;T_2|T_1) for every α in A_n, where T_1 is
/// the first target component and T_2 the rest. Throws Error("TCR needs a target
/// split") for a scalar target.
PropertyReport check_tcr(const JointDistribution& d, const RedundancyMeasure& m, double tol = kDefaultTolerance);

PropertyReport check_lm(const JointDistribution& d, const RedundancyMeasure& m, double tol = kDefaultTolerance);
PropertyReport check_sm(const JointDistribution& d, const RedundancyMeasure& m, double tol = kDefaultTolerance);

/// LM scan over a given redundancy assignment (indexed like lattice.nodes()).
PropertyReport check_lm_values(const RedundancyLattice& lattice, std::span<const double> redundancy,
                               double tol = kDefaultTolerance);

/// I_∩({i}{j}) <= min(I_∩({i}), I_∩({j})) for all i != j, over a redundancy assignment.
PropertyReport check_pairwise_bounds(const RedundancyLattice& lattice, std::span<const double> redundancy,
                                     double tol = kDefaultTolerance);

/// If every atom is nonnegative and RSI > 1e-9, some pairwise redundancy
/// I_∩({i}{j};T) must exceed 1e-9. Vacuous when LP fails or RSI <= 1e-9.
PropertyReport check_rsi_pairwise(const PidResult& p, const JointDistribution& d, double tol = kDefaultTolerance);

/// LM over the redundancy induced by the atoms, whenever the atoms are LP.
/// Vacuous when LP fails.
PropertyReport check_lp_implies_lm(const PidResult& p, double tol = kDefaultTolerance);

/// Target (S_1, S_2) built from the sources of a two-source distribution.
JointDistribution pair_copy(const JointDistribution& d);

/// I_∩({1},{2}; (S_1,S_2)) against I(S_1;S_2). Needs exactly two sources; the
/// pair-copy target is built internally.
PropertyReport check_id(const JointDistribution& d, const RedundancyMeasure& m, double tol = kDefaultTolerance);
/// Vacuous unless I(S_1;S_2) <= tol.
PropertyReport check_iid(const JointDistribution& d, const RedundancyMeasure& m, double tol = kDefaultTolerance);

/// The four equivalent forms of ID for a two-source pair-copy distribution,
/// expressed as deviations that must coincide:
///   I_∩ - I(S1;S2),  H(S1,S2) - I_∪,  I_ws,  H(S1|S2) + H(S2|S1) - I_vul.
/// Pass when all four agree within tol, whether or not ID itself holds.
PropertyReport check_lemma4_equivalents(const PidResult& p, const JointDistribution& d,
                                        double tol = kDefaultTolerance);

struct IdentityCheck {
  std::string identity;  // e.g. "I_cup + I_ws = I([n];T)"
  std::string antichain;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct IdentityReport {
  double tolerance = kDefaultTolerance;
  std::vector<IdentityCheck> checks;

  bool ok() const;
  double max_abs_residual() const;
};

/// Inclusion–exclusion (I_∩ + I_∪ = I(a;T) + I(b;T) for two-member antichains)
/// and complementation (I_∪ + I_ws = I_∩ + I_vul = I([n];T) for every α) on a
/// computed PID.
IdentityReport c_information_identities(const PidResult& p, const JointDistribution& d,
                                        double tol = kDefaultTolerance);

/// Atom-level TCR residual Π(f;T) - Π(f;T_1) - Π(f;T_2|T_1) aggregated through
/// each built-in condition must reproduce the C-information TCR residual. Pass
/// when the aggregation matches within lattice-size × tol.
PropertyReport check_tcr_equivalence(const JointDistribution& d, const RedundancyMeasure& m,
                                     double tol = kDefaultTolerance);

struct ProofStep {
  std::string label;
  double value = 0.0;
};

/// Numerical replay of both inconsistency proofs on the XOR-Source-Copy gate.
struct TheoremWitness {
  std::string measure_id;
  std::string gate_digest;
  std::vector<ProofStep> steps;
  PropertyReport rsi_pairwise;
  PropertyReport pairwise_bounds;
  PropertyReport lp;
  PropertyReport rei;
  PropertyReport tcr;
  PropertyReport id;
  PropertyReport theorem1;  // pass: at least one of LP, ID, REI fails
  PropertyReport theorem2;  // pass: at least one of LP, TCR, REI fails
  std::vector<std::string> conclusions;

  double step(std::string_view label) const;
};

TheoremWitness theorem_witness(const RedundancyMeasure& m, double tol = kDefaultTolerance,
                               const ReiOptions& rei = {});

/// One row of the property matrix: LP/TCR/REI/ID verdicts over a gate corpus.
/// A property is "fail" if any gate fails it, "pass" if at least one gate
/// passes and none fails, "vacuous" otherwise.
struct MatrixRow {
  std::string measure_id;
  std::map<PropertyId, PropertyReport> cells;
};

std::vector<PropertyId> matrix_properties();

MatrixRow property_matrix_row(const RedundancyMeasure& m, std::span<const GateSpec> corpus,
                              double tol = kDefaultTolerance, const ReiOptions& rei = {});

}  // namespace pidkit
