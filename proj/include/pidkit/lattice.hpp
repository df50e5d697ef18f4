#pragma once

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pidkit/source_set.hpp"

namespace pidkit {

/// Enumeration size cap. n <= 4 is the default; n = 5 (7579 atoms) must be
/// requested explicitly.
struct LatticeLimit {
  bool allow_large = false;
  int max_n() const { return allow_large ? 5 : 4; }
};

/// Monotone Boolean function f on the subsets of {1..n} with f(∅)=0 and
/// f({1..n})=1. Stored as a truth table: bit b is f(subset with bitmask b).
class ParthoodDistribution {
 public:
  /// Throws Error when the table violates any of the three axioms.
  ParthoodDistribution(int n, std::uint64_t table);

  int n() const { return n_; }
  std::uint64_t table() const { return table_; }
  bool operator()(SourceSet a) const { return (table_ >> a.bits()) & 1u; }

  /// Number of subsets with f(a)=1.
  int weight() const;

  /// Row in subset bit order, e.g. "0111" for the n=2 redundancy atom.
  std::string row_string() const;

  /// True iff `table` satisfies f(∅)=0, f([n])=1 and upward closure.
  static bool is_valid(int n, std::uint64_t table);

  friend bool operator==(const ParthoodDistribution&, const ParthoodDistribution&) = default;

 private:
  int n_;
  std::uint64_t table_;
};

/// Nonempty set of pairwise ⊆-incomparable, nonempty source sets. Members are
/// kept in lexicographic order so equal antichains compare equal.
class Antichain {
 public:
  /// Throws Error if `members` is empty, contains ∅, or is not an antichain.
  /// Duplicate members are collapsed.
  explicit Antichain(std::vector<SourceSet> members);

  /// Parses "{1}{2,3}"; whitespace is ignored.
  static Antichain parse(std::string_view text);

  /// Minimal elements of an arbitrary tuple of nonempty sets.
  static Antichain minimal_of(std::span<const SourceSet> tuple);

  std::span<const SourceSet> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(SourceSet a) const;
  SourceSet support() const;
  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Antichain& a, const Antichain& b);
  friend bool operator==(const Antichain&, const Antichain&) = default;

 private:
  std::vector<SourceSet> members_;
};

/// All parthood distributions for n sources in canonical lattice order (see
/// RedundancyLattice). Throws CapacityError("lattice too large") above the cap.
std::vector<ParthoodDistribution> enumerate_parthood(int n, LatticeLimit limit = {});

/// Minimal sets a with f(a)=1.
Antichain parthood_to_antichain(const ParthoodDistribution& f);

/// f(b)=1 iff b contains some member of α.
ParthoodDistribution antichain_to_parthood(const Antichain& alpha, int n);

/// α ⪯ β iff every member of β contains some member of α.
bool lattice_leq(const Antichain& alpha, const Antichain& beta);

/// Number of singletons {i} in α.
int degree_of_redundancy(const Antichain& alpha);

/// Logical condition C(a_1..a_m; f) relating an argument tuple to a parthood
/// distribution. The four built-ins are redundancy (all f(a_i)=1), union (some
/// f(a_i)=1), weak synergy (all f(a_i)=0) and vulnerable information (some
/// f(a_i)=0). Custom predicates must be pure.
class Condition {
 public:
  using Predicate = std::function<bool(std::span<const SourceSet>, const ParthoodDistribution&)>;
  enum class Builtin { red, union_info, ws, vul };

  static Condition red() { return Condition(Builtin::red); }
  static Condition union_info() { return Condition(Builtin::union_info); }
  static Condition ws() { return Condition(Builtin::ws); }
  static Condition vul() { return Condition(Builtin::vul); }
  static Condition custom(std::string name, Predicate predicate);
  /// "red", "union", "ws" or "vul".
  static Condition parse(std::string_view name);

  bool holds(std::span<const SourceSet> args, const ParthoodDistribution& f) const;
  const std::string& name() const { return name_; }

 private:
  explicit Condition(Builtin b);
  Condition(std::string name, Predicate predicate) : name_(std::move(name)), predicate_(std::move(predicate)) {}

  std::string name_;
  std::optional<Builtin> builtin_;
  Predicate predicate_;
};

/// x ⪯_C y iff C(x;f) implies C(y;f) for every f in B_n (exhaustive scan).
bool c_order_leq(const Condition& c, std::span<const SourceSet> x, std::span<const SourceSet> y, int n,
                 LatticeLimit limit = {});

/// The redundancy lattice (A_n, ⪯) with its Möbius function.
///
/// Nodes are ordered by descending parthood weight, ties broken by
/// lexicographic member order. Since α ≺ β implies weight(f_α) > weight(f_β),
/// this order is a linear extension: the bottom {1}{2}..{n} comes first, the
/// top {1..n} last, and every node appears after everything below it.
///
/// Immutable after construction.
class RedundancyLattice {
 public:
  RedundancyLattice(int n, LatticeLimit limit = {});

  int n() const { return n_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Antichain>& nodes() const { return nodes_; }
  const Antichain& node(std::size_t i) const { return nodes_[i]; }
  const ParthoodDistribution& parthood(std::size_t i) const { return parthoods_[i]; }
  std::size_t bottom() const { return 0; }
  std::size_t top() const { return nodes_.size() - 1; }

  std::optional<std::size_t> find(const Antichain& alpha) const;
  /// Throws Error if α is not a node of this lattice.
  std::size_t index_of(const Antichain& alpha) const;

  bool leq(std::size_t beta, std::size_t alpha) const { return down_[alpha].test(beta); }

  /// Indices β with β ⪯ α, as a bitset over node indices.
  const boost::dynamic_bitset<>& down_set(std::size_t alpha) const { return down_[alpha]; }

  /// μ(β, α) for β ⪯ α. Throws Error("incomparable") otherwise.
  std::int64_t moebius(std::size_t beta, std::size_t alpha) const;
  std::int64_t moebius(const Antichain& beta, const Antichain& alpha) const;

  /// Whether μ is stored densely (n <= 4). For larger lattices μ(·,α) is
  /// recomputed per call.
  bool has_moebius_table() const { return !moebius_.empty(); }

  /// μ(β, α) for every β (zero where β ⋠ α).
  std::vector<std::int64_t> moebius_column(std::size_t alpha) const;

  /// Lower covers of each node (Hasse diagram edges β ⋖ α).
  const std::vector<std::vector<std::size_t>>& lower_covers() const { return covers_; }
  std::size_t cover_count() const;

 private:
  void compute_moebius_table();

  int n_;
  std::vector<Antichain> nodes_;
  std::vector<ParthoodDistribution> parthoods_;
  std::unordered_map<std::uint64_t, std::size_t> index_by_table_;
  std::vector<boost::dynamic_bitset<>> down_;
  std::vector<std::vector<std::size_t>> covers_;
  std::vector<std::int64_t> moebius_;  // row-major μ(β, α) at [β * size + α]
};

/// Shared, lazily built lattice for n sources. Thread-safe.
std::shared_ptr<const RedundancyLattice> lattice_for(int n, LatticeLimit limit = {});

}  // namespace pidkit
