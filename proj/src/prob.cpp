#include "pidkit/prob.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <set>
#include <tuple>

#include "pidkit/error.hpp"

namespace pidkit {
namespace {

template <class Key>
void accumulate(std::map<Key, Rational>& m, Key key, const Rational& p) {
  auto [it, inserted] = m.try_emplace(std::move(key), p);
  if (!inserted) it->second += p;
}

double entropy_of(const std::map<SymbolTuple, Rational>& m) {
  double h = 0.0;
  for (const auto& [key, p] : m) {
    if (sgn(p) > 0) h -= to_double(p) * log2_of(p);
  }
  return h;
}

std::string hex(const unsigned char* data, unsigned int len) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 0xf];
  }
  return out;
}

}  // namespace

std::string Var::to_string() const {
  switch (kind) {
    case Kind::source:
      return "S" + std::to_string(index);
    case Kind::target:
      return "T" + std::to_string(index);
    case Kind::aux:
      return "Z";
  }
  return "?";
}

JointDistribution::JointDistribution(int n_sources, int target_arity,
                                     std::vector<WeightedOutcome> outcomes)
    : n_sources_(n_sources), target_arity_(target_arity), outcomes_(std::move(outcomes)) {
  if (n_sources_ < 1 || n_sources_ > kMaxSources) {
    throw InputError("n_sources must be in 1.." + std::to_string(kMaxSources) + ", got " +
                     std::to_string(n_sources_));
  }
  if (target_arity_ < 1) throw InputError("target_arity must be positive");
  if (outcomes_.empty()) throw InputError("distribution has no outcomes");

  has_aux_ = outcomes_.front().outcome.aux.has_value();
  Rational total = 0;
  bool any_positive = false;
  for (const auto& [o, p] : outcomes_) {
    if (static_cast<int>(o.sources.size()) != n_sources_) {
      throw InputError("outcome has " + std::to_string(o.sources.size()) + " source values, expected " +
                       std::to_string(n_sources_));
    }
    if (static_cast<int>(o.target.size()) != target_arity_) {
      throw InputError("outcome has " + std::to_string(o.target.size()) + " target values, expected " +
                       std::to_string(target_arity_));
    }
    if (o.aux.has_value() != has_aux_) throw InputError("aux value present on some outcomes only");
    if (sgn(p) < 0 || p > 1) throw InputError("probability " + to_string(p) + " outside [0,1]");
    any_positive = any_positive || sgn(p) > 0;
    total += p;
  }
  if (total != 1) throw InputError("probabilities sum to " + to_string(total) + ", not 1");
  if (!any_positive) throw InputError("support is empty");

  std::sort(outcomes_.begin(), outcomes_.end(),
            [](const WeightedOutcome& a, const WeightedOutcome& b) { return a.outcome < b.outcome; });
  for (std::size_t i = 1; i < outcomes_.size(); ++i) {
    if (outcomes_[i].outcome == outcomes_[i - 1].outcome) throw InputError("duplicate outcome");
  }
}

const Symbol& JointDistribution::value(const Outcome& o, Var v) const {
  switch (v.kind) {
    case Var::Kind::source:
      if (v.index < 1 || v.index > n_sources_) throw Error("no source variable " + v.to_string());
      return o.sources[v.index - 1];
    case Var::Kind::target:
      if (v.index < 1 || v.index > target_arity_) throw Error("no target component " + v.to_string());
      return o.target[v.index - 1];
    case Var::Kind::aux:
      if (!has_aux_) throw Error("distribution has no aux variable");
      return *o.aux;
  }
  throw Error("bad variable selector");
}

SymbolTuple JointDistribution::project(const Outcome& o, std::span<const Var> vars) const {
  SymbolTuple out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(value(o, v));
  return out;
}

std::string JointDistribution::digest() const {
  std::string text = std::to_string(n_sources_) + ";" + std::to_string(target_arity_) + ";" +
                     (has_aux_ ? "z" : "-") + "\n";
  for (const auto& [o, p] : outcomes_) {
    if (sgn(p) == 0) continue;
    for (const auto& s : o.sources) text += s + '\x1f';
    text += '\x1e';
    for (const auto& t : o.target) text += t + '\x1f';
    text += '\x1e';
    if (o.aux) text += *o.aux;
    text += '\x1e' + to_string(p) + '\n';
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  return hex(md.data(), len);
}

bool operator==(const JointDistribution& a, const JointDistribution& b) {
  if (a.n_sources_ != b.n_sources_ || a.target_arity_ != b.target_arity_ || a.has_aux_ != b.has_aux_ ||
      a.outcomes_.size() != b.outcomes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.outcomes_.size(); ++i) {
    if (a.outcomes_[i].outcome != b.outcomes_[i].outcome || a.outcomes_[i].p != b.outcomes_[i].p) {
      return false;
    }
  }
  return true;
}

std::vector<Var> source_vars(SourceSet a) {
  std::vector<Var> out;
  for (int i : a.indices()) out.push_back(Var::source(i));
  return out;
}

std::vector<Var> target_vars(const JointDistribution& d) {
  std::vector<Var> out;
  for (int k = 1; k <= d.target_arity(); ++k) out.push_back(Var::target(k));
  return out;
}

std::map<SymbolTuple, Rational> marginal(const JointDistribution& d, std::span<const Var> vars) {
  std::map<SymbolTuple, Rational> m;
  for (const auto& [o, p] : d.outcomes()) {
    if (sgn(p) > 0) accumulate(m, d.project(o, vars), p);
  }
  return m;
}

std::vector<std::pair<Symbol, Rational>> support_of(const JointDistribution& d, Var v) {
  const std::array<Var, 1> vars{v};
  std::vector<std::pair<Symbol, Rational>> out;
  for (auto& [key, p] : marginal(d, vars)) out.emplace_back(key.front(), p);
  return out;
}

double entropy(const JointDistribution& d, std::span<const Var> vars) {
  return entropy_of(marginal(d, vars));
}

double conditional_entropy(const JointDistribution& d, std::span<const Var> vars,
                           std::span<const Var> given) {
  std::vector<Var> joint(vars.begin(), vars.end());
  joint.insert(joint.end(), given.begin(), given.end());
  return entropy(d, joint) - entropy(d, given);
}

double mutual_information(const JointDistribution& d, std::span<const Var> a, std::span<const Var> b) {
  using Pair = std::pair<SymbolTuple, SymbolTuple>;
  std::map<SymbolTuple, Rational> pa;
  std::map<SymbolTuple, Rational> pb;
  std::map<Pair, Rational> pab;
  for (const auto& [o, p] : d.outcomes()) {
    if (sgn(p) == 0) continue;
    auto ka = d.project(o, a);
    auto kb = d.project(o, b);
    accumulate(pa, ka, p);
    accumulate(pb, kb, p);
    accumulate(pab, Pair{std::move(ka), std::move(kb)}, p);
  }
  double mi = 0.0;
  for (const auto& [key, p] : pab) {
    const Rational ratio = p / (pa.at(key.first) * pb.at(key.second));
    mi += to_double(p) * log2_of(ratio);
  }
  return mi;
}

double conditional_mutual_information(const JointDistribution& d, std::span<const Var> a,
                                      std::span<const Var> b, std::span<const Var> given) {
  using Pair = std::pair<SymbolTuple, SymbolTuple>;
  using Triple = std::tuple<SymbolTuple, SymbolTuple, SymbolTuple>;
  std::map<SymbolTuple, Rational> pc;
  std::map<Pair, Rational> pac;
  std::map<Pair, Rational> pbc;
  std::map<Triple, Rational> pabc;
  for (const auto& [o, p] : d.outcomes()) {
    if (sgn(p) == 0) continue;
    auto ka = d.project(o, a);
    auto kb = d.project(o, b);
    auto kc = d.project(o, given);
    accumulate(pc, kc, p);
    accumulate(pac, Pair{ka, kc}, p);
    accumulate(pbc, Pair{kb, kc}, p);
    accumulate(pabc, Triple{std::move(ka), std::move(kb), std::move(kc)}, p);
  }
  double cmi = 0.0;
  for (const auto& [key, p] : pabc) {
    const auto& [ka, kb, kc] = key;
    const Rational ratio = p * pc.at(kc) / (pac.at(Pair{ka, kc}) * pbc.at(Pair{kb, kc}));
    cmi += to_double(p) * log2_of(ratio);
  }
  return cmi;
}

double marginal_mi(const JointDistribution& d, SourceSet a) {
  if (a.empty()) return 0.0;
  return mutual_information(d, source_vars(a), target_vars(d));
}

JointDistribution condition_on(const JointDistribution& d, Var selector, const Symbol& value) {
  Rational pz = 0;
  for (const auto& [o, p] : d.outcomes()) {
    if (d.value(o, selector) == value) pz += p;
  }
  if (sgn(pz) == 0) {
    throw Error("conditioning on null event " + selector.to_string() + "=" + value);
  }
  std::vector<WeightedOutcome> rows;
  for (const auto& [o, p] : d.outcomes()) {
    if (d.value(o, selector) != value) continue;
    Outcome kept = o;
    if (selector.kind == Var::Kind::aux) kept.aux.reset();
    rows.push_back({std::move(kept), p / pz});
  }
  return JointDistribution(d.n_sources(), d.target_arity(), std::move(rows));
}

JointDistribution retarget(const JointDistribution& d, std::span<const Var> vars) {
  if (vars.empty()) throw Error("retarget needs at least one variable");
  std::map<Outcome, Rational> merged;
  for (const auto& [o, p] : d.outcomes()) {
    Outcome next{o.sources, d.project(o, vars), o.aux};
    accumulate(merged, std::move(next), p);
  }
  std::vector<WeightedOutcome> rows;
  rows.reserve(merged.size());
  for (auto& [o, p] : merged) rows.push_back({o, p});
  return JointDistribution(d.n_sources(), static_cast<int>(vars.size()), std::move(rows));
}

JointDistribution select_sources(const JointDistribution& d, SourceSet keep) {
  if (keep.empty() || !keep.subset_of(SourceSet::full(d.n_sources()))) {
    throw Error("cannot keep sources " + keep.to_string() + " of a " + std::to_string(d.n_sources()) +
                "-source distribution");
  }
  const auto vars = source_vars(keep);
  std::map<Outcome, Rational> merged;
  for (const auto& [o, p] : d.outcomes()) {
    Outcome next{d.project(o, vars), o.target, o.aux};
    accumulate(merged, std::move(next), p);
  }
  std::vector<WeightedOutcome> rows;
  rows.reserve(merged.size());
  for (auto& [o, p] : merged) rows.push_back({o, p});
  return JointDistribution(keep.size(), d.target_arity(), std::move(rows));
}

namespace {

template <class Key>
void check_bijective(const std::map<Key, Key>& table, const std::set<Key>& support, const std::string& what) {
  std::set<Key> images;
  for (const auto& value : support) {
    const auto it = table.find(value);
    if (it == table.end()) throw Error("relabeling of " + what + " does not cover its whole support");
    if (!images.insert(it->second).second) throw Error("relabeling of " + what + " is not invertible");
  }
}

}  // namespace

JointDistribution reencode(const JointDistribution& d, const Reencoding& r) {
  if (r.sources.size() > static_cast<std::size_t>(d.n_sources())) {
    throw Error("reencoding names more sources than the distribution has");
  }
  for (std::size_t i = 0; i < r.sources.size(); ++i) {
    if (!r.sources[i]) continue;
    std::set<Symbol> support;
    for (const auto& row : d.outcomes()) support.insert(row.outcome.sources[i]);
    check_bijective(*r.sources[i], support, "S" + std::to_string(i + 1));
  }
  int new_arity = d.target_arity();
  if (r.target) {
    std::set<SymbolTuple> support;
    for (const auto& row : d.outcomes()) support.insert(row.outcome.target);
    check_bijective(*r.target, support, "T");
    new_arity = -1;
    for (const auto& t : support) {
      const int a = static_cast<int>(r.target->at(t).size());
      if (new_arity >= 0 && a != new_arity) throw Error("target relabeling images have mixed arity");
      new_arity = a;
    }
  }

  std::vector<WeightedOutcome> rows;
  rows.reserve(d.outcomes().size());
  for (const auto& [o, p] : d.outcomes()) {
    Outcome next = o;
    for (std::size_t i = 0; i < r.sources.size(); ++i) {
      if (r.sources[i]) next.sources[i] = r.sources[i]->at(o.sources[i]);
    }
    if (r.target) next.target = r.target->at(o.target);
    rows.push_back({std::move(next), p});
  }
  return JointDistribution(d.n_sources(), new_arity, std::move(rows));
}

Reencoding invert(const Reencoding& r) {
  auto flip = [](const auto& table) {
    std::remove_cvref_t<decltype(table)> inverse;
    for (const auto& [from, to] : table) {
      if (!inverse.emplace(to, from).second) throw Error("relabeling is not invertible");
    }
    return inverse;
  };
  Reencoding out;
  for (const auto& s : r.sources) {
    out.sources.push_back(s ? std::optional<SymbolMap>(flip(*s)) : std::nullopt);
  }
  if (r.target) out.target = flip(*r.target);
  return out;
}

}  // namespace pidkit
