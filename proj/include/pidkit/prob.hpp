#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pidkit/rational.hpp"
#include "pidkit/source_set.hpp"

namespace pidkit {

using Symbol = std::string;
using SymbolTuple = std::vector<Symbol>;

/// One row of a joint outcome table: source values S_1..S_n, target
/// components T_1..T_k, and an optional auxiliary conditioning variable Z.
struct Outcome {
  SymbolTuple sources;
  SymbolTuple target;
  std::optional<Symbol> aux;

  friend auto operator<=>(const Outcome&, const Outcome&) = default;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct WeightedOutcome {
  Outcome outcome;
  Rational p;
};

/// Selects one variable of a joint distribution. Indices are 1-based.
struct Var {
  enum class Kind { source, target, aux };
  Kind kind = Kind::source;
  int index = 0;

  static Var source(int i) { return {Kind::source, i}; }
  static Var target(int k) { return {Kind::target, k}; }
  static Var aux() { return {Kind::aux, 0}; }

  std::string to_string() const;
  friend bool operator==(const Var&, const Var&) = default;
};

/// Finite joint distribution of (S_1..S_n, T_1..T_k[, Z]) with exact rational
/// probabilities. Immutable; outcomes are kept sorted so two distributions over
/// the same table compare equal row by row.
///
/// Invariants checked at construction: arities match, probabilities lie in
/// [0,1] and sum to exactly one, no duplicate outcome, at least one outcome has
/// positive probability, and the aux variable is present on all rows or none.
/// Zero-probability rows are allowed and ignored by every functional.
class JointDistribution {
 public:
  JointDistribution(int n_sources, int target_arity, std::vector<WeightedOutcome> outcomes);

  int n_sources() const { return n_sources_; }
  int target_arity() const { return target_arity_; }
  bool has_aux() const { return has_aux_; }
  std::span<const WeightedOutcome> outcomes() const { return outcomes_; }

  /// Value of one variable on one outcome.
  const Symbol& value(const Outcome& o, Var v) const;

  /// Values of several variables, concatenated.
  SymbolTuple project(const Outcome& o, std::span<const Var> vars) const;

  /// Hex SHA-256 of the canonical serialization (sorted rows, reduced fractions,
  /// zero-probability rows dropped).
  std::string digest() const;

  friend bool operator==(const JointDistribution& a, const JointDistribution& b);

 private:
  int n_sources_;
  int target_arity_;
  bool has_aux_ = false;
  std::vector<WeightedOutcome> outcomes_;
};

/// Source variables of a SourceSet, ascending.
std::vector<Var> source_vars(SourceSet a);

/// All target components T_1..T_k.
std::vector<Var> target_vars(const JointDistribution& d);

/// Marginal distribution of the given variables over positive-probability rows.
std::map<SymbolTuple, Rational> marginal(const JointDistribution& d, std::span<const Var> vars);

/// Support of a single variable with its marginal probabilities.
std::vector<std::pair<Symbol, Rational>> support_of(const JointDistribution& d, Var v);

/// Shannon entropy in bits of the joint marginal of `vars`.
double entropy(const JointDistribution& d, std::span<const Var> vars);

/// H(vars | given) in bits.
double conditional_entropy(const JointDistribution& d, std::span<const Var> vars,
                           std::span<const Var> given);

/// I(a; b) in bits. Each log term is the log of an exact rational ratio.
double mutual_information(const JointDistribution& d, std::span<const Var> a,
                          std::span<const Var> b);

/// I(a; b | given) in bits.
double conditional_mutual_information(const JointDistribution& d, std::span<const Var> a,
                                      std::span<const Var> b, std::span<const Var> given);

/// I({S_i}_{i in a}; T) with T the full target. I(∅;T) = 0.
double marginal_mi(const JointDistribution& d, SourceSet a);

/// Conditional distribution given `selector == value`. All variables are kept;
/// the conditioned one becomes constant, except the aux variable which is dropped.
/// Throws Error("conditioning on null event") when the value has probability zero.
JointDistribution condition_on(const JointDistribution& d, Var selector, const Symbol& value);

/// New distribution whose target is the tuple of `vars` (sources, target
/// components, or aux); sources and aux are kept as they are. Rows that collapse
/// onto the same outcome are merged.
JointDistribution retarget(const JointDistribution& d, std::span<const Var> vars);

/// Keeps only the sources in `keep`, renumbered 1..|keep| in ascending order.
JointDistribution select_sources(const JointDistribution& d, SourceSet keep);

using SymbolMap = std::map<Symbol, Symbol>;
using TupleMap = std::map<SymbolTuple, SymbolTuple>;

/// Per-source relabelings plus a relabeling of the joint target support.
/// An absent entry means identity. Output target tuples may have a different
/// arity than the input (all images must share one arity).
struct Reencoding {
  std::vector<std::optional<SymbolMap>> sources;
  std::optional<TupleMap> target;
};

/// Relabels sources and target. Every table must be a bijection from the
/// variable's support onto its image; otherwise Error("not invertible").
JointDistribution reencode(const JointDistribution& d, const Reencoding& r);

/// Inverse of a reencoding that `reencode(d, r)` accepted.
Reencoding invert(const Reencoding& r);

}  // namespace pidkit
