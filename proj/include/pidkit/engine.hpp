#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pidkit/lattice.hpp"
#include "pidkit/measure.hpp"
#include "pidkit/prob.hpp"

namespace pidkit {

/// Default tolerance, in bits, for real-valued identity checks.
inline constexpr double kDefaultTolerance = 1e-9;

/// Information atoms Π(α;T) for every α in A_n, bound to the measure and the
/// input distribution that produced them.
class PidResult {
 public:
  PidResult(std::shared_ptr<const RedundancyLattice> lattice, std::vector<double> atoms, std::string measure_id,
            std::string digest);

  int n() const { return lattice_->n(); }
  const RedundancyLattice& lattice() const { return *lattice_; }
  std::shared_ptr<const RedundancyLattice> lattice_ptr() const { return lattice_; }
  std::span<const double> atoms() const { return atoms_; }
  double atom(std::size_t i) const { return atoms_.at(i); }
  double atom(const Antichain& alpha) const { return atoms_.at(lattice_->index_of(alpha)); }
  const std::string& measure_id() const { return measure_id_; }
  const std::string& digest() const { return digest_; }

 private:
  std::shared_ptr<const RedundancyLattice> lattice_;
  std::vector<double> atoms_;
  std::string measure_id_;
  std::string digest_;
};

/// Π(α) = Σ_{β ⪯ α} μ(β,α) · I(β). `redundancy` is indexed like lattice.nodes().
/// Works for any ring V (double, Rational, integers). Needs the dense Möbius table.
template <class V>
std::vector<V> moebius_invert(const RedundancyLattice& lattice, std::span<const V> redundancy);

/// I(α) = Σ_{β ⪯ α} Π(β), the inverse of moebius_invert.
template <class V>
std::vector<V> lattice_sum(const RedundancyLattice& lattice, std::span<const V> atoms);

/// Atoms by recursive subtraction, Π(α) = I(α) - Σ_{β ≺ α} Π(β), in node order.
/// Equivalent to moebius_invert; usable on lattices without a dense Möbius table.
template <class V>
std::vector<V> invert_by_subtraction(const RedundancyLattice& lattice, std::span<const V> redundancy);

/// Evaluates the measure on every node of A_n and inverts.
/// A measure failure is rethrown as Error naming the offending antichain.
PidResult atoms_from_redundancy(const JointDistribution& d, const RedundancyMeasure& measure,
                                LatticeLimit limit = {});

/// Redundancy I_∩(α) of every node, in lattice order.
std::vector<double> redundancy_values(const JointDistribution& d, const RedundancyMeasure& measure,
                                      const RedundancyLattice& lattice);

struct ConsistencyEntry {
  SourceSet subset;
  double atom_sum = 0.0;
  double mutual_information = 0.0;
  double residual = 0.0;  // atom_sum - mutual_information
};

struct ConsistencyReport {
  double tolerance = kDefaultTolerance;
  std::vector<ConsistencyEntry> entries;  // one per nonempty subset of [n]

  bool ok() const;
  double max_abs_residual() const;
  std::vector<SourceSet> violations() const;
};

/// For every nonempty a ⊆ [n]: Σ_{f(a)=1} Π(f) against I(a;T).
ConsistencyReport consistency_check(const PidResult& p, const JointDistribution& d,
                                    double tol = kDefaultTolerance);

/// Σ over f in B_n with C(args; f) of Π(f).
double c_information(const PidResult& p, const Condition& c, std::span<const SourceSet> args);
double c_information(const PidResult& p, const Condition& c, const Antichain& args);

/// Π(f; T | Z) = Σ_z p(z) Π^{p(S,T | Z=z)}(f; T).
PidResult conditional_atoms(const JointDistribution& d, const RedundancyMeasure& measure, Var z,
                            LatticeLimit limit = {});

/// I^C(args; T | Z), the C-information of the conditional atoms.
double conditional_c_information(const JointDistribution& d, const RedundancyMeasure& measure,
                                 const Condition& c, std::span<const SourceSet> args, Var z);

/// I_∩(args; T | Z) = Σ_z p(z) I_∩^{p(·|Z=z)}(args; T), evaluated directly from
/// the measure without building atoms.
double conditional_redundancy(const JointDistribution& d, const RedundancyMeasure& measure,
                              std::span<const SourceSet> args, Var z);

/// Redundancy–synergy index Σ_i I(S_i;T) - I(S_1..S_n;T).
double rsi(const JointDistribution& d);

struct RsiReport {
  double rsi = 0.0;             // from mutual information
  double atom_expression = 0.0; // Σ_{r≥2} (r-1)Π(α) - Σ_{r=0} Π(α)
  double residual = 0.0;
  double tolerance = kDefaultTolerance;
  bool ok() const;
};

RsiReport rsi_decomposition_check(const PidResult& p, const JointDistribution& d,
                                  double tol = kDefaultTolerance);

}  // namespace pidkit
