#include "pidkit/properties.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "pidkit/error.hpp"

namespace pidkit {

namespace {

constexpr std::array<std::string_view, 14> kPropertyNames = {"LP", "REI", "TCR", "LM", "SM", "ID", "IID",
                                                             "L1", "L2", "C1", "L3", "L4", "T1", "T2"};

// Threshold for a redundancy to count as strictly positive.
constexpr double kPositive = 1e-9;

PropertyReport make_report(PropertyId id, std::string_view measure_id, double tol) {
  PropertyReport r;
  r.property = id;
  r.measure_id = std::string(measure_id);
  r.tolerance = tol;
  return r;
}

void set_fail(PropertyReport& r, std::string digest, std::string tuple, std::vector<Evidence> evidence) {
  r.verdict = Verdict::fail;
  r.witness = Witness{std::move(digest), std::move(tuple), std::move(evidence)};
}

std::vector<double> atoms_vector(const PidResult& p) { return {p.atoms().begin(), p.atoms().end()}; }

double pair_redundancy(const RedundancyMeasure& m, const JointDistribution& d, int i, int j) {
  const std::array<SourceSet, 2> args{SourceSet::of({i}), SourceSet::of({j})};
  return m.evaluate(d, args);
}

std::string pair_name(int i, int j) { return "{" + std::to_string(i) + "}{" + std::to_string(j) + "}"; }

// Permutations of 0..k-1 from a 64-bit engine. A hand-rolled Fisher–Yates keeps
// the sequence identical across standard libraries.
std::vector<std::size_t> random_permutation(std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = k; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  return perm;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct Supports {
  std::vector<std::vector<Symbol>> sources;
  std::vector<SymbolTuple> target;
};

Supports supports_of(const JointDistribution& d) {
  std::vector<std::set<Symbol>> s(d.n_sources());
  std::set<SymbolTuple> t;
  for (const auto& row : d.outcomes()) {
    for (int i = 0; i < d.n_sources(); ++i) s[i].insert(row.outcome.sources[i]);
    t.insert(row.outcome.target);
  }
  Supports out;
  for (const auto& set : s) out.sources.emplace_back(set.begin(), set.end());
  out.target.assign(t.begin(), t.end());
  return out;
}

// Relabels support[k] as a fresh symbol numbered perm[k]; fresh names also
// change the sort order of the rows.
Reencoding relabeling(const Supports& s, std::span<const std::vector<std::size_t>> perms) {
  Reencoding r;
  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    SymbolMap map;
    for (std::size_t k = 0; k < s.sources[i].size(); ++k) map[s.sources[i][k]] = "r" + std::to_string(perms[i][k]);
    r.sources.emplace_back(std::move(map));
  }
  TupleMap target;
  const auto& tp = perms[s.sources.size()];
  for (std::size_t k = 0; k < s.target.size(); ++k) target[s.target[k]] = {"t" + std::to_string(tp[k])};
  r.target = std::move(target);
  return r;
}

std::size_t factorial(std::size_t k) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

struct AtomDiff {
  double max_abs = 0.0;
  std::size_t index = 0;
};

AtomDiff compare_atoms(std::span<const double> a, std::span<const double> b) {
  AtomDiff d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double delta = std::abs(a[i] - b[i]);
    if (delta > d.max_abs) d = {delta, i};
  }
  return d;
}

JointDistribution scalar_target(const JointDistribution& d, std::vector<Var> vars) { return retarget(d, vars); }

// Second TCR term Σ_{t1} p(t1) I_∩(args; T_2 | T_1 = t1) with T_1 the first
// target component and T_2 the rest.
double tcr_second_term(const JointDistribution& d, const RedundancyMeasure& m, std::span<const SourceSet> args) {
  std::vector<Var> rest;
  for (int k = 2; k <= d.target_arity(); ++k) rest.push_back(Var::target(k));
  double sum = 0.0;
  for (const auto& [t1, p] : support_of(d, Var::target(1))) {
    sum += to_double(p) * m.evaluate(retarget(condition_on(d, Var::target(1), t1), rest), args);
  }
  return sum;
}

PropertyReport combine(PropertyId id, std::string_view measure_id, double tol,
                       std::span<const PropertyReport> parts, std::string search_space) {
  auto out = make_report(id, measure_id, tol);
  out.search_space = std::move(search_space);
  bool any_pass = false;
  for (const auto& r : parts) {
    if (r.verdict == Verdict::fail && out.verdict != Verdict::fail) {
      out.verdict = Verdict::fail;
      out.witness = r.witness;
      out.note = r.note;
    }
    any_pass = any_pass || r.verdict == Verdict::pass;
  }
  if (out.verdict != Verdict::fail && !any_pass) out.verdict = Verdict::vacuous;
  return out;
}

}  // namespace

std::string_view to_string(PropertyId id) { return kPropertyNames.at(static_cast<std::size_t>(id)); }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous: return "vacuous";
  }
  return "?";
}

PropertyId parse_property(std::string_view text) {
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kPropertyNames.size(); ++i) {
    if (kPropertyNames[i] == upper) return static_cast<PropertyId>(i);
  }
  throw InputError("unknown property '" + std::string(text) + "'");
}

Verdict parse_verdict(std::string_view text) {
  if (text == "pass") return Verdict::pass;
  if (text == "fail") return Verdict::fail;
  if (text == "vacuous") return Verdict::vacuous;
  throw InputError("unknown verdict '" + std::string(text) + "'");
}

PropertyReport check_lp(const PidResult& p, double tol) {
  auto r = make_report(PropertyId::LP, p.measure_id(), tol);
  const auto& lattice = p.lattice();
  r.search_space = "all " + std::to_string(lattice.size()) + " atoms";
  std::size_t worst = 0;
  for (std::size_t i = 1; i < lattice.size(); ++i) {
    if (p.atom(i) < p.atom(worst)) worst = i;
  }
  if (p.atom(worst) < -tol) {
    set_fail(r, p.digest(), lattice.node(worst).to_string(), {{"atom", p.atom(worst)}});
  }
  return r;
}

std::optional<TupleMap> pair_target_map(const JointDistribution& d, int i, int j) {
  TupleMap map;
  std::set<SymbolTuple> images;
  for (const auto& [o, p] : d.outcomes()) {
    if (sgn(p) == 0) continue;
    SymbolTuple key{o.sources[i - 1], o.sources[j - 1]};
    const auto [it, inserted] = map.emplace(key, o.target);
    if (inserted) {
      if (!images.insert(o.target).second) return std::nullopt;
    } else if (it->second != o.target) {
      return std::nullopt;
    }
  }
  return map;
}

PropertyReport check_rei(const JointDistribution& d, const RedundancyMeasure& m, const ReiOptions& options) {
  auto r = make_report(PropertyId::REI, m.id(), options.tol);
  const auto base = atoms_from_redundancy(d, m);
  const auto base_atoms = atoms_vector(base);
  const auto& lattice = base.lattice();
  const auto supports = supports_of(d);

  auto try_reencoding = [&](const Reencoding& enc, const std::string& label) {
    const auto moved = atoms_from_redundancy(reencode(d, enc), m);
    const auto diff = compare_atoms(base_atoms, moved.atoms());
    if (diff.max_abs > options.tol && r.verdict != Verdict::fail) {
      set_fail(r, d.digest(), lattice.node(diff.index).to_string(),
               {{"atom", base_atoms[diff.index]}, {"atom after " + label, moved.atom(diff.index)}});
    }
  };

  std::mt19937_64 rng(options.seed);
  for (int trial = 0; trial < options.trials; ++trial) {
    std::vector<std::vector<std::size_t>> perms;
    for (const auto& s : supports.sources) perms.push_back(random_permutation(s.size(), rng));
    perms.push_back(random_permutation(supports.target.size(), rng));
    try_reencoding(relabeling(supports, perms), "random relabeling " + std::to_string(trial));
  }

  bool small = supports.target.size() <= 4;
  std::size_t combos = factorial(supports.target.size());
  for (const auto& s : supports.sources) {
    small = small && s.size() <= 4;
    combos *= factorial(s.size());
  }
  std::size_t exhaustive = 0;
  if (small && combos <= options.exhaustive_limit) {
    std::vector<std::vector<std::vector<std::size_t>>> choices;
    for (const auto& s : supports.sources) choices.push_back(all_permutations(s.size()));
    choices.push_back(all_permutations(supports.target.size()));
    std::vector<std::size_t> digit(choices.size(), 0);
    for (std::size_t c = 0; c < combos; ++c) {
      std::vector<std::vector<std::size_t>> perms;
      for (std::size_t v = 0; v < choices.size(); ++v) perms.push_back(choices[v][digit[v]]);
      try_reencoding(relabeling(supports, perms), "exhaustive relabeling " + std::to_string(c));
      for (std::size_t v = 0; v < digit.size() && ++digit[v] == choices[v].size(); ++v) digit[v] = 0;
    }
    exhaustive = combos;
  }

  int pair_encodings = 0;
  for (int i = 1; i <= d.n_sources(); ++i) {
    for (int j = i + 1; j <= d.n_sources(); ++j) {
      auto f = pair_target_map(d, i, j);
      if (!f) continue;
      const std::array<Var, 2> vars{Var::source(i), Var::source(j)};
      const auto pair = retarget(d, vars);
      try {
        if (!(reencode(pair, Reencoding{{}, std::move(f)}) == d)) continue;
      } catch (const Error&) {
        continue;  // zero-probability rows outside the map
      }
      ++pair_encodings;
      const auto pair_atoms = atoms_from_redundancy(pair, m);
      const auto diff = compare_atoms(base_atoms, pair_atoms.atoms());
      if (diff.max_abs > options.tol && r.verdict != Verdict::fail) {
        set_fail(r, d.digest(), pair_name(i, j),
                 {{"I_cap" + pair_name(i, j) + " on T", pair_redundancy(m, d, i, j)},
                  {"I_cap" + pair_name(i, j) + " on (S" + std::to_string(i) + ",S" + std::to_string(j) + ")",
                   pair_redundancy(m, pair, i, j)},
                  {"max atom difference", diff.max_abs}});
        r.note = "target is a bijective re-encoding of (S" + std::to_string(i) + ",S" + std::to_string(j) + ")";
      }
    }
  }

  r.search_space = std::to_string(options.trials) + " random relabelings (seed " + std::to_string(options.seed) +
                   "), " + std::to_string(exhaustive) + " exhaustive relabelings, " +
                   std::to_string(pair_encodings) + " pair re-encodings";
  return r;
}

PropertyReport check_tcr(const JointDistribution& d, const RedundancyMeasure& m, double tol) {
  if (d.target_arity() < 2) throw Error("TCR needs a target split");
  auto r = make_report(PropertyId::TCR, m.id(), tol);
  const auto& lattice = *lattice_for(d.n_sources());
  const auto first_target = scalar_target(d, {Var::target(1)});
  double worst = -1.0;
  for (const auto& alpha : lattice.nodes()) {
    const double lhs = m.evaluate(d, alpha);
    const double first = m.evaluate(first_target, alpha);
    const double second = tcr_second_term(d, m, alpha.members());
    const double residual = lhs - first - second;
    if (std::abs(residual) > tol && std::abs(residual) > worst) {
      worst = std::abs(residual);
      set_fail(r, d.digest(), alpha.to_string(),
               {{"lhs", lhs}, {"first", first}, {"second", second}, {"residual", residual}});
    }
  }
  r.search_space = "all " + std::to_string(lattice.size()) + " antichains, split T1 | T2..T" +
                   std::to_string(d.target_arity());
  if (r.verdict == Verdict::pass) r.note = "no violation found";
  return r;
}

PropertyReport check_lm_values(const RedundancyLattice& lattice, std::span<const double> redundancy, double tol) {
  auto r = make_report(PropertyId::LM, "", tol);
  std::size_t pairs = 0;
  double worst = 0.0;
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    const auto& down = lattice.down_set(a);
    for (auto b = down.find_first(); b != boost::dynamic_bitset<>::npos; b = down.find_next(b)) {
      if (b == a) continue;
      ++pairs;
      const double drop = redundancy[b] - redundancy[a];
      if (drop > tol && drop > worst) {
        worst = drop;
        set_fail(r, "", lattice.node(b).to_string() + " <= " + lattice.node(a).to_string(),
                 {{"lower", redundancy[b]}, {"upper", redundancy[a]}});
      }
    }
  }
  r.search_space = std::to_string(pairs) + " comparable pairs";
  return r;
}

PropertyReport check_lm(const JointDistribution& d, const RedundancyMeasure& m, double tol) {
  const auto lattice = lattice_for(d.n_sources());
  auto r = check_lm_values(*lattice, redundancy_values(d, m, *lattice), tol);
  r.measure_id = std::string(m.id());
  if (r.witness) r.witness->digest = d.digest();
  return r;
}

PropertyReport check_sm(const JointDistribution& d, const RedundancyMeasure& m, double tol) {
  auto r = make_report(PropertyId::SM, m.id(), tol);
  const auto lattice = lattice_for(d.n_sources());
  const auto sets = nonempty_subsets(d.n_sources());
  std::size_t pairs = 0;
  double worst = 0.0;
  for (const auto& alpha : lattice->nodes()) {
    const double before = m.evaluate(d, alpha);
    for (const auto a : sets) {
      std::vector<SourceSet> grown(alpha.members().begin(), alpha.members().end());
      grown.push_back(a);
      const double after = m.evaluate(d, grown);
      ++pairs;
      const double rise = after - before;
      if (rise > tol && rise > worst) {
        worst = rise;
        set_fail(r, d.digest(), alpha.to_string() + " + " + a.to_string(), {{"before", before}, {"after", after}});
      }
    }
  }
  r.search_space = std::to_string(pairs) + " (antichain, added collection) pairs";
  return r;
}

PropertyReport check_pairwise_bounds(const RedundancyLattice& lattice, std::span<const double> redundancy,
                                     double tol) {
  auto r = make_report(PropertyId::C1, "", tol);
  const int n = lattice.n();
  if (n < 2) {
    r.verdict = Verdict::vacuous;
    r.search_space = "no source pairs";
    return r;
  }
  auto value = [&](const Antichain& a) { return redundancy[lattice.index_of(a)]; };
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const double red = value(Antichain({SourceSet::of({i}), SourceSet::of({j})}));
      const double bound = std::min(value(Antichain({SourceSet::of({i})})), value(Antichain({SourceSet::of({j})})));
      if (red - bound > tol && red - bound > worst) {
        worst = red - bound;
        set_fail(r, "", pair_name(i, j), {{"redundancy", red}, {"bound", bound}});
      }
    }
  }
  r.search_space = std::to_string(n * (n - 1) / 2) + " source pairs";
  return r;
}

PropertyReport check_rsi_pairwise(const PidResult& p, const JointDistribution& d, double tol) {
  auto r = make_report(PropertyId::L1, p.measure_id(), tol);
  const int n = p.n();
  r.search_space = std::to_string(n * (n - 1) / 2) + " pairwise redundancies";
  const double rsi_value = rsi(d);
  if (check_lp(p, tol).verdict == Verdict::fail) {
    r.verdict = Verdict::vacuous;
    r.note = "atoms are not all nonnegative";
    return r;
  }
  if (rsi_value <= kPositive) {
    r.verdict = Verdict::vacuous;
    r.note = "RSI is not positive";
    return r;
  }
  const auto& lattice = p.lattice();
  const auto redundancy = lattice_sum<double>(lattice, p.atoms());
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      best = std::max(best, redundancy[lattice.index_of(Antichain({SourceSet::of({i}), SourceSet::of({j})}))]);
    }
  }
  if (best <= kPositive) {
    set_fail(r, p.digest(), "{i}{j}", {{"RSI", rsi_value}, {"max pairwise I_cap", best}});
  }
  return r;
}

PropertyReport check_lp_implies_lm(const PidResult& p, double tol) {
  auto r = make_report(PropertyId::L2, p.measure_id(), tol);
  if (check_lp(p, tol).verdict == Verdict::fail) {
    r.verdict = Verdict::vacuous;
    r.note = "atoms are not all nonnegative";
    return r;
  }
  const auto redundancy = lattice_sum<double>(p.lattice(), p.atoms());
  auto lm = check_lm_values(p.lattice(), redundancy, tol);
  r.verdict = lm.verdict;
  r.search_space = lm.search_space;
  r.witness = std::move(lm.witness);
  if (r.witness) r.witness->digest = p.digest();
  return r;
}

JointDistribution pair_copy(const JointDistribution& d) {
  if (d.n_sources() != 2) throw Error("the pair copy needs exactly two sources");
  const std::array<Var, 2> vars{Var::source(1), Var::source(2)};
  return retarget(d, vars);
}

namespace {

struct IdValues {
  JointDistribution pair;
  double redundancy;
  double source_mi;
};

IdValues id_values(const JointDistribution& d, const RedundancyMeasure& m, std::string_view what) {
  if (d.n_sources() != 2) throw Error(std::string(what) + " needs exactly two sources");
  auto pair = pair_copy(d);
  const double red = pair_redundancy(m, pair, 1, 2);
  const std::array<Var, 1> s1{Var::source(1)};
  const std::array<Var, 1> s2{Var::source(2)};
  const double mi = mutual_information(pair, s1, s2);
  return {std::move(pair), red, mi};
}

}  // namespace

PropertyReport check_id(const JointDistribution& d, const RedundancyMeasure& m, double tol) {
  const auto v = id_values(d, m, "ID");
  auto r = make_report(PropertyId::ID, m.id(), tol);
  r.search_space = "pair copy of the given sources";
  if (std::abs(v.redundancy - v.source_mi) > tol) {
    set_fail(r, v.pair.digest(), "{1}{2}", {{"I_cap({1}{2};(S1,S2))", v.redundancy}, {"I(S1;S2)", v.source_mi}});
  }
  return r;
}

PropertyReport check_iid(const JointDistribution& d, const RedundancyMeasure& m, double tol) {
  const auto v = id_values(d, m, "IID");
  auto r = make_report(PropertyId::IID, m.id(), tol);
  r.search_space = "pair copy of the given sources";
  if (v.source_mi > tol) {
    r.verdict = Verdict::vacuous;
    r.note = "sources are dependent";
    return r;
  }
  if (std::abs(v.redundancy) > tol) {
    set_fail(r, v.pair.digest(), "{1}{2}", {{"I_cap({1}{2};(S1,S2))", v.redundancy}, {"I(S1;S2)", v.source_mi}});
  }
  return r;
}

PropertyReport check_lemma4_equivalents(const PidResult& p, const JointDistribution& d, double tol) {
  if (d.n_sources() != 2) throw Error("ID equivalents need exactly two sources");
  for (const auto& [o, pr] : d.outcomes()) {
    if (sgn(pr) != 0 && o.target != o.sources) throw Error("ID equivalents need the target (S1,S2)");
  }
  auto r = make_report(PropertyId::L4, p.measure_id(), tol);
  r.search_space = "four ID formulations";
  const Antichain pair({SourceSet::of({1}), SourceSet::of({2})});
  const std::array<Var, 1> s1{Var::source(1)};
  const std::array<Var, 1> s2{Var::source(2)};
  const std::array<Var, 2> both{Var::source(1), Var::source(2)};
  const double i_cap = c_information(p, Condition::red(), pair);
  const double i_cup = c_information(p, Condition::union_info(), pair);
  const double i_ws = c_information(p, Condition::ws(), pair);
  const double i_vul = c_information(p, Condition::vul(), pair);
  const double mi = mutual_information(d, s1, s2);
  const double h12 = entropy(d, both);
  const double h1g2 = conditional_entropy(d, s1, s2);
  const double h2g1 = conditional_entropy(d, s2, s1);

  const std::array<double, 4> dev{i_cap - mi, h12 - i_cup, i_ws, h1g2 + h2g1 - i_vul};
  const auto [lo, hi] = std::minmax_element(dev.begin(), dev.end());
  if (*hi - *lo > tol) {
    set_fail(r, d.digest(), "{1}{2}",
             {{"I_cap - I(S1;S2)", dev[0]},
              {"H(S1,S2) - I_cup", dev[1]},
              {"I_ws", dev[2]},
              {"H(S1|S2) + H(S2|S1) - I_vul", dev[3]}});
  }
  return r;
}

bool IdentityReport::ok() const { return max_abs_residual() <= tolerance; }

double IdentityReport::max_abs_residual() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, std::abs(c.lhs - c.rhs));
  return worst;
}

IdentityReport c_information_identities(const PidResult& p, const JointDistribution& d, double tol) {
  IdentityReport r;
  r.tolerance = tol;
  const double full = marginal_mi(d, SourceSet::full(d.n_sources()));
  for (const auto& alpha : p.lattice().nodes()) {
    const double red = c_information(p, Condition::red(), alpha);
    const double uni = c_information(p, Condition::union_info(), alpha);
    const double ws = c_information(p, Condition::ws(), alpha);
    const double vul = c_information(p, Condition::vul(), alpha);
    const auto name = alpha.to_string();
    r.checks.push_back({"I_cup + I_ws = I([n];T)", name, uni + ws, full});
    r.checks.push_back({"I_cap + I_vul = I([n];T)", name, red + vul, full});
    if (alpha.size() == 2) {
      r.checks.push_back({"I_cap + I_cup = I(a;T) + I(b;T)", name, red + uni,
                          marginal_mi(d, alpha.members()[0]) + marginal_mi(d, alpha.members()[1])});
    }
  }
  return r;
}

PropertyReport check_tcr_equivalence(const JointDistribution& d, const RedundancyMeasure& m, double tol) {
  if (d.target_arity() < 2) throw Error("TCR needs a target split");
  auto r = make_report(PropertyId::L3, m.id(), tol);
  const auto lattice = lattice_for(d.n_sources());
  const std::size_t size = lattice->size();

  std::vector<Var> rest;
  for (int k = 2; k <= d.target_arity(); ++k) rest.push_back(Var::target(k));
  const auto whole = atoms_from_redundancy(d, m);
  const auto first = atoms_from_redundancy(scalar_target(d, {Var::target(1)}), m);
  std::vector<double> second(size, 0.0);
  for (const auto& [t1, p] : support_of(d, Var::target(1))) {
    const auto inner = atoms_from_redundancy(retarget(condition_on(d, Var::target(1), t1), rest), m);
    for (std::size_t i = 0; i < size; ++i) second[i] += to_double(p) * inner.atom(i);
  }

  std::vector<double> atom_residual(size);
  double max_atom = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    atom_residual[i] = whole.atom(i) - first.atom(i) - second[i];
    max_atom = std::max(max_atom, std::abs(atom_residual[i]));
  }

  // Redundancy-level residuals, evaluated straight from the measure.
  std::vector<double> red_residual(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto& alpha = lattice->node(i);
    red_residual[i] = m.evaluate(d, alpha) - m.evaluate(scalar_target(d, {Var::target(1)}), alpha) -
                      tcr_second_term(d, m, alpha.members());
  }
  const auto inverted = moebius_invert<double>(*lattice, red_residual);
  const double slack = static_cast<double>(size) * tol;
  for (std::size_t i = 0; i < size && r.verdict != Verdict::fail; ++i) {
    if (std::abs(inverted[i] - atom_residual[i]) > slack) {
      set_fail(r, d.digest(), lattice->node(i).to_string(),
               {{"atom residual", atom_residual[i]}, {"inverted redundancy residual", inverted[i]}});
    }
  }

  const std::array<Condition, 4> conditions{Condition::red(), Condition::union_info(), Condition::ws(),
                                            Condition::vul()};
  for (const auto& c : conditions) {
    for (const auto& alpha : lattice->nodes()) {
      if (r.verdict == Verdict::fail) break;
      const double residual = c_information(whole, c, alpha) - c_information(first, c, alpha) -
                              [&] {
                                double s = 0.0;
                                for (std::size_t i = 0; i < size; ++i) {
                                  if (c.holds(alpha.members(), lattice->parthood(i))) s += second[i];
                                }
                                return s;
                              }();
      if (std::abs(residual) > static_cast<double>(size) * max_atom + tol) {
        set_fail(r, d.digest(), c.name() + " " + alpha.to_string(),
                 {{"C-information residual", residual}, {"max atom residual", max_atom}});
      }
    }
  }
  r.search_space = std::to_string(size) + " atoms, 4 conditions";
  r.note = max_atom <= tol ? "atoms satisfy the chain rule" : "atoms violate the chain rule";
  return r;
}

double TheoremWitness::step(std::string_view label) const {
  for (const auto& s : steps) {
    if (s.label == label) return s.value;
  }
  throw Error("no proof step '" + std::string(label) + "'");
}

TheoremWitness theorem_witness(const RedundancyMeasure& m, double tol, const ReiOptions& rei) {
  const auto gate = make_gate(GateSpec{GateSpec::Kind::xor_source_copy, 0});
  const std::string mid(m.id());
  TheoremWitness w;
  w.measure_id = mid;
  w.gate_digest = gate.digest();
  auto record = [&](std::string label, double value) { w.steps.push_back({std::move(label), value}); };

  for (int i = 1; i <= 3; ++i) {
    record("I(S" + std::to_string(i) + ";T)", marginal_mi(gate, SourceSet::of({i})));
  }
  record("I(S1,S2,S3;T)", marginal_mi(gate, SourceSet::full(3)));
  record("RSI", rsi(gate));

  const auto gate_atoms = atoms_from_redundancy(gate, m);
  std::vector<PropertyReport> lp_parts{check_lp(gate_atoms, tol)};
  std::vector<PropertyReport> c1_parts;
  std::vector<PropertyReport> id_parts;
  std::vector<PropertyReport> tcr_parts;
  const auto& lattice = gate_atoms.lattice();

  double max_pairwise = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 3; ++i) {
    for (int j = i + 1; j <= 3; ++j) {
      const std::string ij = pair_name(i, j);
      const std::string si = "S" + std::to_string(i);
      const std::string sj = "S" + std::to_string(j);
      const double on_t = pair_redundancy(m, gate, i, j);
      max_pairwise = std::max(max_pairwise, on_t);
      record("I_cap(" + ij + ";T)", on_t);

      // REI step: T = F_ij(S_i, S_j).
      const std::array<Var, 2> copy_vars{Var::source(i), Var::source(j)};
      const auto pair_target = retarget(gate, copy_vars);
      const double on_pair = pair_redundancy(m, pair_target, i, j);
      record("I_cap(" + ij + ";(" + si + "," + sj + "))", on_pair);
      lp_parts.push_back(check_lp(atoms_from_redundancy(pair_target, m), tol));

      // ID step on the two-source marginal.
      const auto two = select_sources(gate, SourceSet::of({i, j}));
      record("I(" + si + ";" + sj + ")", mutual_information(gate, std::array{Var::source(i)},
                                                           std::array{Var::source(j)}));
      auto id = check_id(two, m, tol);
      if (id.witness) id.witness->tuple = ij;
      id_parts.push_back(std::move(id));

      // TCR step on (S_j, S_i): first component S_j, then S_i given S_j.
      const std::array<Var, 2> split_vars{Var::source(j), Var::source(i)};
      const auto split = retarget(gate, split_vars);
      const std::array<Var, 1> first_var{Var::target(1)};
      const auto first_d = retarget(split, first_var);
      const std::array<SourceSet, 2> args{SourceSet::of({i}), SourceSet::of({j})};
      const double lhs = m.evaluate(split, args);
      const double first = m.evaluate(first_d, args);
      const double second = tcr_second_term(split, m, args);
      record("TCR lhs " + ij, lhs);
      record("TCR first I_cap(" + ij + ";" + sj + ")", first);
      record("TCR second I_cap(" + ij + ";" + si + "|" + sj + ")", second);
      record("TCR residual " + ij, lhs - first - second);
      auto step = make_report(PropertyId::TCR, mid, tol);
      step.search_space = "pair step " + ij;
      if (std::abs(lhs - first - second) > tol) {
        set_fail(step, split.digest(), ij, {{"lhs", lhs}, {"first", first}, {"second", second}});
        step.note = "I_cap(" + ij + ";(" + sj + "," + si + ")) != I_cap(" + ij + ";" + sj + ") + I_cap(" + ij +
                    ";" + si + "|" + sj + ")";
      }
      tcr_parts.push_back(std::move(step));

      // Pairwise upper bounds for both split terms.
      const std::array<Var, 1> vi{Var::source(i)};
      const std::array<Var, 1> vj{Var::source(j)};
      record("C1 bound first min(I(" + si + ";" + sj + "),I(" + sj + ";" + sj + "))",
             std::min(mutual_information(gate, vi, vj), mutual_information(gate, vj, vj)));
      record("C1 bound second min(I(" + si + ";" + si + "|" + sj + "),I(" + sj + ";" + si + "|" + sj + "))",
             std::min(conditional_mutual_information(gate, vi, vi, vj),
                      conditional_mutual_information(gate, vj, vi, vj)));
      auto bound = check_pairwise_bounds(lattice, redundancy_values(first_d, m, lattice), tol);
      if (bound.witness) bound.witness->digest = first_d.digest();
      c1_parts.push_back(std::move(bound));
      lp_parts.push_back(check_lp(atoms_from_redundancy(first_d, m), tol));

      const std::array<Var, 1> second_var{Var::target(2)};
      for (const auto& [value, p] : support_of(split, Var::target(1))) {
        const auto cond = retarget(condition_on(split, Var::target(1), value), second_var);
        auto b = check_pairwise_bounds(lattice, redundancy_values(cond, m, lattice), tol);
        if (b.witness) b.witness->digest = cond.digest();
        c1_parts.push_back(std::move(b));
        lp_parts.push_back(check_lp(atoms_from_redundancy(cond, m), tol));
      }
    }
  }
  record("max pairwise I_cap", max_pairwise);

  w.lp = combine(PropertyId::LP, mid, tol, lp_parts,
                 "atoms of the gate, its pair-copy targets, split marginals and conditionals");
  w.rei = check_rei(gate, m, rei);
  w.id = combine(PropertyId::ID, mid, tol, id_parts, "3 source pairs of the gate");

  try {
    tcr_parts.push_back(check_tcr(gate, m, tol));
  } catch (const Error&) {
  }
  w.tcr = combine(PropertyId::TCR, mid, tol, tcr_parts, "3 pair steps plus all antichains on the gate");
  if (w.tcr.verdict == Verdict::pass) w.tcr.note = "no violation found";
  w.pairwise_bounds = combine(PropertyId::C1, mid, tol, c1_parts, "split marginals and conditionals of 3 pair steps");

  w.rsi_pairwise = make_report(PropertyId::L1, mid, tol);
  w.rsi_pairwise.search_space = "3 pairwise redundancies on the gate";
  const double rsi_value = w.step("RSI");
  if (w.lp.verdict == Verdict::fail) {
    w.rsi_pairwise.verdict = Verdict::vacuous;
    w.rsi_pairwise.note = "atoms are not all nonnegative";
  } else if (rsi_value > kPositive && max_pairwise <= kPositive) {
    set_fail(w.rsi_pairwise, w.gate_digest, "{i}{j}", {{"RSI", rsi_value}, {"max pairwise I_cap", max_pairwise}});
  } else {
    w.rsi_pairwise.note = "some pairwise redundancy exceeds " + std::to_string(kPositive);
  }

  auto theorem = [&](PropertyId id, std::initializer_list<const PropertyReport*> parts, std::string names) {
    auto t = make_report(id, mid, tol);
    t.search_space = "XOR-Source-Copy gate";
    std::string failed;
    for (const auto* p : parts) {
      if (p->verdict == Verdict::fail) failed += (failed.empty() ? "" : ", ") + std::string(to_string(p->property));
    }
    if (failed.empty()) {
      set_fail(t, w.gate_digest, "", {{"max pairwise I_cap", max_pairwise}});
      t.note = "all of " + names + " passed";
    } else {
      t.note = "violates " + failed;
      w.conclusions.push_back(mid + " violates " + failed + " (of " + names + ")");
    }
    return t;
  };
  w.theorem1 = theorem(PropertyId::T1, {&w.lp, &w.id, &w.rei}, "LP, ID, REI");
  w.theorem2 = theorem(PropertyId::T2, {&w.lp, &w.tcr, &w.rei}, "LP, TCR, REI");
  return w;
}

std::vector<PropertyId> matrix_properties() { return {PropertyId::LP, PropertyId::TCR, PropertyId::REI, PropertyId::ID}; }

MatrixRow property_matrix_row(const RedundancyMeasure& m, std::span<const GateSpec> corpus, double tol,
                              const ReiOptions& rei) {
  MatrixRow row;
  row.measure_id = std::string(m.id());
  std::map<PropertyId, std::vector<PropertyReport>> parts;
  std::string names;
  for (const auto& spec : corpus) {
    const auto d = make_gate(spec);
    names += (names.empty() ? "" : ", ") + spec.name();
    auto tag = [&](PropertyReport r) {
      if (r.witness) r.note = spec.name() + (r.note.empty() ? "" : ": " + r.note);
      return r;
    };
    parts[PropertyId::LP].push_back(tag(check_lp(atoms_from_redundancy(d, m), tol)));
    parts[PropertyId::REI].push_back(tag(check_rei(d, m, rei)));
    if (d.target_arity() >= 2) {
      parts[PropertyId::TCR].push_back(tag(check_tcr(d, m, tol)));
    } else {
      auto v = make_report(PropertyId::TCR, row.measure_id, tol);
      v.verdict = Verdict::vacuous;
      parts[PropertyId::TCR].push_back(v);
    }
    if (d.n_sources() == 2) {
      parts[PropertyId::ID].push_back(tag(check_id(d, m, tol)));
    } else {
      auto v = make_report(PropertyId::ID, row.measure_id, tol);
      v.verdict = Verdict::vacuous;
      parts[PropertyId::ID].push_back(v);
    }
  }
  for (const auto id : matrix_properties()) {
    auto cell = combine(id, row.measure_id, tol, parts[id], "gates: " + names);
    if (cell.verdict == Verdict::pass) cell.note = "no violation found";
    row.cells.emplace(id, std::move(cell));
  }
  return row;
}

}  // namespace pidkit
