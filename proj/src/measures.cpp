#include "pidkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pidkit/error.hpp"

namespace pidkit {

SpecificInformation specific_information(const JointDistribution& d, SourceSet a) {
  if (!a.subset_of(SourceSet::full(d.n_sources()))) throw Error("source set " + a.to_string() + " out of range");
  const auto sv = source_vars(a);
  const auto tv = target_vars(d);
  std::map<SymbolTuple, Rational> pt;
  std::map<SymbolTuple, Rational> ps;
  std::map<std::pair<SymbolTuple, SymbolTuple>, Rational> pst;
  for (const auto& [o, p] : d.outcomes()) {
    if (sgn(p) == 0) continue;
    auto ks = d.project(o, sv);
    auto kt = d.project(o, tv);
    pt[kt] += p;
    ps[ks] += p;
    pst[{std::move(ks), std::move(kt)}] += p;
  }
  std::map<SymbolTuple, double> values;
  for (const auto& [t, p] : pt) values[t] = 0.0;
  for (const auto& [key, p] : pst) {
    const auto& [s, t] = key;
    const Rational& p_t = pt.at(t);
    const Rational weight = p / p_t;  // p(s_a | t)
    values[t] += to_double(weight) * log2_of(p / (ps.at(s) * p_t));
  }
  return SpecificInformation(std::move(values));
}

double i_min(const JointDistribution& d, std::span<const SourceSet> args) {
  if (args.empty()) throw Error("I_min needs at least one source collection");
  std::vector<SpecificInformation> spec;
  spec.reserve(args.size());
  for (const auto a : args) spec.push_back(specific_information(d, a));
  const auto pt = marginal(d, target_vars(d));
  double sum = 0.0;
  for (const auto& [t, p] : pt) {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& s : spec) lowest = std::min(lowest, s.at(t));
    sum += to_double(p) * lowest;
  }
  return sum;
}

double i_sx(const JointDistribution& d, std::span<const SourceSet> args) {
  if (args.empty()) throw Error("I_sx needs at least one source collection");
  for (const auto a : args) {
    if (!a.subset_of(SourceSet::full(d.n_sources()))) throw Error("source set " + a.to_string() + " out of range");
  }
  struct Row {
    const Rational* p;
    SymbolTuple target;
    std::vector<SymbolTuple> keys;  // observed value of each collection
  };
  const auto tv = target_vars(d);
  std::vector<Row> rows;
  std::map<SymbolTuple, Rational> pt;
  for (const auto& [o, p] : d.outcomes()) {
    if (sgn(p) == 0) continue;
    Row row{&p, d.project(o, tv), {}};
    for (const auto a : args) row.keys.push_back(d.project(o, source_vars(a)));
    pt[row.target] += p;
    rows.push_back(std::move(row));
  }

  double sum = 0.0;
  for (const auto& r : rows) {
    Rational p_union = 0;
    Rational p_target_and_union = 0;
    for (const auto& q : rows) {
      bool in_union = false;
      for (std::size_t i = 0; i < args.size() && !in_union; ++i) in_union = q.keys[i] == r.keys[i];
      if (!in_union) continue;
      p_union += *q.p;
      if (q.target == r.target) p_target_and_union += *q.p;
    }
    // r itself lies in the union, so both probabilities are positive.
    sum += to_double(*r.p) * log2_of(p_target_and_union / (p_union * pt.at(r.target)));
  }
  return sum;
}

const MeasureRegistry& MeasureRegistry::builtin() {
  static const MeasureRegistry registry = [] {
    MeasureRegistry r;
    r.add(std::make_shared<IMin>());
    r.add(std::make_shared<ISx>());
    return r;
  }();
  return registry;
}

void MeasureRegistry::add(MeasurePtr measure) {
  if (!measure) throw Error("null measure");
  const std::string id(measure->id());
  if (!measures_.emplace(id, std::move(measure)).second) throw Error("measure '" + id + "' already registered");
}

MeasurePtr MeasureRegistry::get(std::string_view id) const {
  const auto it = measures_.find(id);
  if (it == measures_.end()) {
    std::string known;
    for (const auto& [k, v] : measures_) known += (known.empty() ? "" : ", ") + k;
    throw Error("unknown measure '" + std::string(id) + "' (registered: " + known + ")");
  }
  return it->second;
}

bool MeasureRegistry::contains(std::string_view id) const { return measures_.find(id) != measures_.end(); }

std::vector<std::string> MeasureRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : measures_) out.push_back(k);
  return out;
}

ConformanceReport conformance_suite(const RedundancyMeasure& m, const JointDistribution& d, double tol) {
  const int n = d.n_sources();
  if (n > 3) throw Error("conformance suite is exhaustive and limited to n <= 3");
  ConformanceReport report;
  report.measure_id = std::string(m.id());
  report.tolerance = tol;

  std::map<std::vector<SourceSet>, double> cache;
  auto value = [&](const std::vector<SourceSet>& tuple) {
    auto it = cache.find(tuple);
    if (it == cache.end()) it = cache.emplace(tuple, m.evaluate(d, tuple)).first;
    return it->second;
  };
  auto compare = [&](const char* property, const std::vector<SourceSet>& lhs, const std::vector<SourceSet>& rhs,
                     double lhs_value, double rhs_value) {
    ++report.comparisons;
    if (std::abs(lhs_value - rhs_value) > tol) {
      report.violations.push_back({property, tuple_to_string(lhs), tuple_to_string(rhs), lhs_value, rhs_value});
    }
  };

  const auto sets = nonempty_subsets(n);
  std::vector<std::vector<SourceSet>> tuples;
  for (const auto a : sets) {
    tuples.push_back({a});
    for (const auto b : sets) {
      tuples.push_back({a, b});
      for (const auto c : sets) tuples.push_back({a, b, c});
    }
  }

  for (const auto& tuple : tuples) {
    if (tuple.size() == 1) {
      compare("self-redundancy", tuple, tuple, value(tuple), marginal_mi(d, tuple.front()));
    }
    auto sorted = tuple;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != tuple) compare("symmetry", tuple, sorted, value(tuple), value(sorted));

    for (std::size_t i = 0; i < tuple.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < tuple.size() && !dominated; ++j) {
        dominated = i != j && tuple[j].subset_of(tuple[i]);
      }
      if (!dominated) continue;
      auto reduced = tuple;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
      compare("superset-invariance", tuple, reduced, value(tuple), value(reduced));
      break;
    }
  }
  return report;
}

}  // namespace pidkit
