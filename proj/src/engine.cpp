#include "pidkit/engine.hpp"

#include <cmath>

#include "pidkit/error.hpp"

namespace pidkit {

PidResult::PidResult(std::shared_ptr<const RedundancyLattice> lattice, std::vector<double> atoms,
                     std::string measure_id, std::string digest)
    : lattice_(std::move(lattice)),
      atoms_(std::move(atoms)),
      measure_id_(std::move(measure_id)),
      digest_(std::move(digest)) {
  if (!lattice_) throw Error("PidResult needs a lattice");
  if (atoms_.size() != lattice_->size()) throw Error("atom vector does not match lattice size");
}

template <class V>
std::vector<V> moebius_invert(const RedundancyLattice& lattice, std::span<const V> redundancy) {
  if (redundancy.size() != lattice.size()) throw Error("redundancy vector does not match lattice size");
  if (!lattice.has_moebius_table()) throw Error("lattice has no dense Möbius table; use invert_by_subtraction");
  std::vector<V> atoms(lattice.size(), V(0));
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    const auto& below = lattice.down_set(a);
    for (auto b = below.find_first(); b != boost::dynamic_bitset<>::npos; b = below.find_next(b)) {
      const std::int64_t mu = lattice.moebius(b, a);
      if (mu != 0) atoms[a] += V(mu) * redundancy[b];
    }
  }
  return atoms;
}

template <class V>
std::vector<V> lattice_sum(const RedundancyLattice& lattice, std::span<const V> atoms) {
  if (atoms.size() != lattice.size()) throw Error("atom vector does not match lattice size");
  std::vector<V> redundancy(lattice.size(), V(0));
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    const auto& below = lattice.down_set(a);
    for (auto b = below.find_first(); b != boost::dynamic_bitset<>::npos; b = below.find_next(b)) {
      redundancy[a] += atoms[b];
    }
  }
  return redundancy;
}

template <class V>
std::vector<V> invert_by_subtraction(const RedundancyLattice& lattice, std::span<const V> redundancy) {
  if (redundancy.size() != lattice.size()) throw Error("redundancy vector does not match lattice size");
  std::vector<V> atoms(lattice.size(), V(0));
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    V value = redundancy[a];
    const auto& below = lattice.down_set(a);
    for (auto b = below.find_first(); b < a; b = below.find_next(b)) value -= atoms[b];
    atoms[a] = value;
  }
  return atoms;
}

template std::vector<double> moebius_invert(const RedundancyLattice&, std::span<const double>);
template std::vector<Rational> moebius_invert(const RedundancyLattice&, std::span<const Rational>);
template std::vector<std::int64_t> moebius_invert(const RedundancyLattice&, std::span<const std::int64_t>);
template std::vector<double> lattice_sum(const RedundancyLattice&, std::span<const double>);
template std::vector<Rational> lattice_sum(const RedundancyLattice&, std::span<const Rational>);
template std::vector<std::int64_t> lattice_sum(const RedundancyLattice&, std::span<const std::int64_t>);
template std::vector<double> invert_by_subtraction(const RedundancyLattice&, std::span<const double>);
template std::vector<Rational> invert_by_subtraction(const RedundancyLattice&, std::span<const Rational>);

std::vector<double> redundancy_values(const JointDistribution& d, const RedundancyMeasure& measure,
                                      const RedundancyLattice& lattice) {
  if (d.n_sources() != lattice.n()) {
    throw Error("distribution has " + std::to_string(d.n_sources()) + " sources, lattice is for n=" +
                std::to_string(lattice.n()));
  }
  std::vector<double> values;
  values.reserve(lattice.size());
  for (const auto& alpha : lattice.nodes()) {
    try {
      values.push_back(measure.evaluate(d, alpha));
    } catch (const std::exception& e) {
      throw Error("measure '" + std::string(measure.id()) + "' failed on " + alpha.to_string() + ": " + e.what());
    }
  }
  return values;
}

PidResult atoms_from_redundancy(const JointDistribution& d, const RedundancyMeasure& measure, LatticeLimit limit) {
  auto lattice = lattice_for(d.n_sources(), limit);
  const auto redundancy = redundancy_values(d, measure, *lattice);
  auto atoms = lattice->has_moebius_table()
                   ? moebius_invert<double>(*lattice, redundancy)
                   : invert_by_subtraction<double>(*lattice, redundancy);
  return PidResult(std::move(lattice), std::move(atoms), std::string(measure.id()), d.digest());
}

bool ConsistencyReport::ok() const { return max_abs_residual() <= tolerance; }

double ConsistencyReport::max_abs_residual() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, std::abs(e.residual));
  return m;
}

std::vector<SourceSet> ConsistencyReport::violations() const {
  std::vector<SourceSet> out;
  for (const auto& e : entries) {
    if (std::abs(e.residual) > tolerance) out.push_back(e.subset);
  }
  return out;
}

ConsistencyReport consistency_check(const PidResult& p, const JointDistribution& d, double tol) {
  if (p.n() != d.n_sources()) throw Error("PidResult and distribution disagree on n");
  ConsistencyReport report;
  report.tolerance = tol;
  const auto& lattice = p.lattice();
  for (const auto a : nonempty_subsets(p.n())) {
    ConsistencyEntry e;
    e.subset = a;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      if (lattice.parthood(i)(a)) e.atom_sum += p.atom(i);
    }
    e.mutual_information = marginal_mi(d, a);
    e.residual = e.atom_sum - e.mutual_information;
    report.entries.push_back(e);
  }
  return report;
}

double c_information(const PidResult& p, const Condition& c, std::span<const SourceSet> args) {
  const auto& lattice = p.lattice();
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (c.holds(args, lattice.parthood(i))) sum += p.atom(i);
  }
  return sum;
}

double c_information(const PidResult& p, const Condition& c, const Antichain& args) {
  return c_information(p, c, args.members());
}

PidResult conditional_atoms(const JointDistribution& d, const RedundancyMeasure& measure, Var z,
                            LatticeLimit limit) {
  auto lattice = lattice_for(d.n_sources(), limit);
  std::vector<double> atoms(lattice->size(), 0.0);
  for (const auto& [value, pz] : support_of(d, z)) {
    const auto inner = atoms_from_redundancy(condition_on(d, z, value), measure, limit);
    const double w = to_double(pz);
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] += w * inner.atom(i);
  }
  return PidResult(std::move(lattice), std::move(atoms), std::string(measure.id()), d.digest());
}

double conditional_c_information(const JointDistribution& d, const RedundancyMeasure& measure,
                                 const Condition& c, std::span<const SourceSet> args, Var z) {
  return c_information(conditional_atoms(d, measure, z), c, args);
}

double conditional_redundancy(const JointDistribution& d, const RedundancyMeasure& measure,
                              std::span<const SourceSet> args, Var z) {
  double sum = 0.0;
  for (const auto& [value, pz] : support_of(d, z)) {
    sum += to_double(pz) * measure.evaluate(condition_on(d, z, value), args);
  }
  return sum;
}

double rsi(const JointDistribution& d) {
  double sum = 0.0;
  for (int i = 1; i <= d.n_sources(); ++i) sum += marginal_mi(d, SourceSet::of({i}));
  return sum - marginal_mi(d, SourceSet::full(d.n_sources()));
}

bool RsiReport::ok() const { return std::abs(residual) <= tolerance; }

RsiReport rsi_decomposition_check(const PidResult& p, const JointDistribution& d, double tol) {
  RsiReport report;
  report.tolerance = tol;
  report.rsi = rsi(d);
  const auto& lattice = p.lattice();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const int r = degree_of_redundancy(lattice.node(i));
    if (r >= 2) report.atom_expression += (r - 1) * p.atom(i);
    if (r == 0) report.atom_expression -= p.atom(i);
  }
  report.residual = report.atom_expression - report.rsi;
  return report;
}

}  // namespace pidkit
