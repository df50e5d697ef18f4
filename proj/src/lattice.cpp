#include "pidkit/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <mutex>

#include "pidkit/error.hpp"

namespace pidkit {
namespace {

std::uint64_t full_mask(int n) {
  const std::uint64_t bits = std::uint64_t{1} << n;
  return bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void check_n(int n, LatticeLimit limit) {
  if (n < 1) throw Error("number of sources must be positive");
  if (n > limit.max_n()) {
    throw CapacityError("lattice too large: n=" + std::to_string(n) + " exceeds cap " +
                        std::to_string(limit.max_n()) + (limit.allow_large ? "" : " (n=5 needs allow_large)"));
  }
}

// Monotone Boolean functions on m variables, built by splitting on the last
// variable: f = (f0, f1) with f0 <= f1 pointwise.
std::vector<std::uint64_t> monotone_tables(int m) {
  if (m == 0) return {0u, 1u};
  const auto lower = monotone_tables(m - 1);
  const int half = 1 << (m - 1);
  std::vector<std::uint64_t> out;
  for (const auto f0 : lower) {
    for (const auto f1 : lower) {
      if ((f0 & ~f1) == 0) out.push_back(f0 | (f1 << half));
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ParthoodDistribution

ParthoodDistribution::ParthoodDistribution(int n, std::uint64_t table) : n_(n), table_(table) {
  if (n < 1 || n > kMaxSources) throw Error("parthood distribution needs 1 <= n <= 5");
  if (!is_valid(n, table)) throw Error("table is not a parthood distribution");
}

bool ParthoodDistribution::is_valid(int n, std::uint64_t table) {
  if ((table & ~full_mask(n)) != 0) return false;
  const std::uint32_t top = (1u << n) - 1u;
  if (table & 1u) return false;
  if (!((table >> top) & 1u)) return false;
  for (std::uint32_t a = 0; a <= top; ++a) {
    if (!((table >> a) & 1u)) continue;
    for (int i = 0; i < n; ++i) {
      if (!((table >> (a | (1u << i))) & 1u)) return false;
    }
  }
  return true;
}

int ParthoodDistribution::weight() const { return std::popcount(table_); }

std::string ParthoodDistribution::row_string() const {
  std::string s;
  for (std::uint32_t a = 0; a < (1u << n_); ++a) s += ((table_ >> a) & 1u) ? '1' : '0';
  return s;
}

// ---------------------------------------------------------------------------
// Antichain

Antichain::Antichain(std::vector<SourceSet> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw Error("antichain must be nonempty");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].empty()) throw Error("antichain may not contain the empty set");
    for (std::size_t j = 0; j < members_.size(); ++j) {
      if (i != j && members_[i].subset_of(members_[j])) {
        throw Error("not an antichain: " + members_[i].to_string() + " is a subset of " +
                    members_[j].to_string());
      }
    }
  }
}

Antichain Antichain::parse(std::string_view text) {
  std::vector<SourceSet> members;
  std::vector<int> current;
  bool open = false;
  int number = -1;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') {
      if (open) throw Error("nested '{' in antichain '" + std::string(text) + "'");
      open = true;
      current.clear();
    } else if (std::isdigit(static_cast<unsigned char>(c)) && open) {
      number = (number < 0 ? 0 : number * 10) + (c - '0');
    } else if ((c == ',' || c == '}') && open) {
      if (number >= 0) current.push_back(number);
      else if (c == ',') throw Error("empty index in antichain '" + std::string(text) + "'");
      number = -1;
      if (c == '}') {
        members.push_back(SourceSet::of(current));
        open = false;
      }
    } else {
      throw Error("malformed antichain '" + std::string(text) + "'");
    }
  }
  if (open) throw Error("unterminated antichain '" + std::string(text) + "'");
  return Antichain(std::move(members));
}

Antichain Antichain::minimal_of(std::span<const SourceSet> tuple) {
  std::vector<SourceSet> minimal;
  for (const auto a : tuple) {
    if (a.empty()) throw Error("argument tuple contains the empty set");
    const bool dominated = std::any_of(tuple.begin(), tuple.end(),
                                       [a](SourceSet b) { return b != a && b.subset_of(a); });
    if (!dominated) minimal.push_back(a);
  }
  return Antichain(std::move(minimal));
}

bool Antichain::contains(SourceSet a) const {
  return std::find(members_.begin(), members_.end(), a) != members_.end();
}

SourceSet Antichain::support() const {
  SourceSet u;
  for (const auto a : members_) u = u | a;
  return u;
}

std::string Antichain::to_string() const { return tuple_to_string(members_); }

std::strong_ordering operator<=>(const Antichain& a, const Antichain& b) {
  return std::lexicographical_compare_three_way(a.members_.begin(), a.members_.end(), b.members_.begin(),
                                                b.members_.end());
}

// ---------------------------------------------------------------------------
// Free functions

Antichain parthood_to_antichain(const ParthoodDistribution& f) {
  std::vector<SourceSet> minimal;
  const std::uint32_t top = (1u << f.n()) - 1u;
  for (std::uint32_t a = 1; a <= top; ++a) {
    const auto set = SourceSet::from_bits(a);
    if (!f(set)) continue;
    bool is_minimal = true;
    for (int i = 0; i < f.n() && is_minimal; ++i) {
      if ((a >> i) & 1u) is_minimal = !f(SourceSet::from_bits(a & ~(1u << i)));
    }
    if (is_minimal) minimal.push_back(set);
  }
  return Antichain(std::move(minimal));
}

ParthoodDistribution antichain_to_parthood(const Antichain& alpha, int n) {
  if (n < 1 || n > kMaxSources) throw Error("n out of range");
  const auto universe = SourceSet::full(n);
  std::uint64_t table = 0;
  for (const auto a : alpha.members()) {
    if (!a.subset_of(universe)) throw Error("antichain " + alpha.to_string() + " is not over n=" + std::to_string(n));
  }
  for (std::uint32_t b = 0; b < (1u << n); ++b) {
    const auto set = SourceSet::from_bits(b);
    for (const auto a : alpha.members()) {
      if (a.subset_of(set)) {
        table |= std::uint64_t{1} << b;
        break;
      }
    }
  }
  return ParthoodDistribution(n, table);
}

bool lattice_leq(const Antichain& alpha, const Antichain& beta) {
  for (const auto b : beta.members()) {
    const auto members = alpha.members();
    if (std::none_of(members.begin(), members.end(), [b](SourceSet a) { return a.subset_of(b); })) return false;
  }
  return true;
}

int degree_of_redundancy(const Antichain& alpha) {
  int r = 0;
  for (const auto a : alpha.members()) r += a.size() == 1 ? 1 : 0;
  return r;
}

std::vector<ParthoodDistribution> enumerate_parthood(int n, LatticeLimit limit) {
  check_n(n, limit);
  struct Entry {
    ParthoodDistribution f;
    Antichain alpha;
  };
  std::vector<Entry> entries;
  for (const auto table : monotone_tables(n)) {
    if (ParthoodDistribution::is_valid(n, table)) {
      ParthoodDistribution f(n, table);
      entries.push_back({f, parthood_to_antichain(f)});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.f.weight() != b.f.weight()) return a.f.weight() > b.f.weight();
    return a.alpha < b.alpha;
  });
  std::vector<ParthoodDistribution> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.f);
  return out;
}

// ---------------------------------------------------------------------------
// Condition

Condition::Condition(Builtin b) : builtin_(b) {
  switch (b) {
    case Builtin::red:
      name_ = "red";
      break;
    case Builtin::union_info:
      name_ = "union";
      break;
    case Builtin::ws:
      name_ = "ws";
      break;
    case Builtin::vul:
      name_ = "vul";
      break;
  }
}

Condition Condition::custom(std::string name, Predicate predicate) {
  if (!predicate) throw Error("custom condition needs a predicate");
  return Condition(std::move(name), std::move(predicate));
}

Condition Condition::parse(std::string_view name) {
  if (name == "red") return red();
  if (name == "union") return union_info();
  if (name == "ws") return ws();
  if (name == "vul") return vul();
  throw Error("unknown condition '" + std::string(name) + "' (expected red, union, ws or vul)");
}

bool Condition::holds(std::span<const SourceSet> args, const ParthoodDistribution& f) const {
  if (!builtin_) return predicate_(args, f);
  auto in = [&f](SourceSet a) { return f(a); };
  auto out = [&f](SourceSet a) { return !f(a); };
  switch (*builtin_) {
    case Builtin::red:
      return std::all_of(args.begin(), args.end(), in);
    case Builtin::union_info:
      return std::any_of(args.begin(), args.end(), in);
    case Builtin::ws:
      return std::all_of(args.begin(), args.end(), out);
    case Builtin::vul:
      return std::any_of(args.begin(), args.end(), out);
  }
  return false;
}

bool c_order_leq(const Condition& c, std::span<const SourceSet> x, std::span<const SourceSet> y, int n,
                 LatticeLimit limit) {
  for (const auto& f : enumerate_parthood(n, limit)) {
    if (c.holds(x, f) && !c.holds(y, f)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// RedundancyLattice

RedundancyLattice::RedundancyLattice(int n, LatticeLimit limit) : n_(n) {
  parthoods_ = enumerate_parthood(n, limit);
  const std::size_t size = parthoods_.size();
  nodes_.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    nodes_.push_back(parthood_to_antichain(parthoods_[i]));
    index_by_table_.emplace(parthoods_[i].table(), i);
  }

  // β ⪯ α iff every set above α's members is above β's members, i.e. f_α <= f_β.
  down_.assign(size, boost::dynamic_bitset<>(size));
  for (std::size_t a = 0; a < size; ++a) {
    const auto fa = parthoods_[a].table();
    for (std::size_t b = 0; b <= a; ++b) {
      if ((fa & ~parthoods_[b].table()) == 0) down_[a].set(b);
    }
  }

  covers_.assign(size, {});
  for (std::size_t a = 0; a < size; ++a) {
    boost::dynamic_bitset<> dominated(size);
    for (std::size_t b = a; b-- > 0;) {
      if (!down_[a].test(b) || dominated.test(b)) continue;
      covers_[a].push_back(b);
      dominated |= down_[b];
    }
    std::reverse(covers_[a].begin(), covers_[a].end());
  }

  if (n <= 4) compute_moebius_table();
}

void RedundancyLattice::compute_moebius_table() {
  const std::size_t size = nodes_.size();
  moebius_.assign(size * size, 0);
  for (std::size_t b = 0; b < size; ++b) {
    moebius_[b * size + b] = 1;
    for (std::size_t a = b + 1; a < size; ++a) {
      if (!leq(b, a)) continue;
      std::int64_t sum = 0;
      for (std::size_t g = b; g < a; ++g) {
        if (leq(b, g) && leq(g, a)) sum += moebius_[b * size + g];
      }
      moebius_[b * size + a] = -sum;
    }
  }
}

std::optional<std::size_t> RedundancyLattice::find(const Antichain& alpha) const {
  for (const auto a : alpha.members()) {
    if (!a.subset_of(SourceSet::full(n_))) return std::nullopt;
  }
  const auto it = index_by_table_.find(antichain_to_parthood(alpha, n_).table());
  if (it == index_by_table_.end()) return std::nullopt;
  return it->second;
}

std::size_t RedundancyLattice::index_of(const Antichain& alpha) const {
  const auto i = find(alpha);
  if (!i) throw Error(alpha.to_string() + " is not a node of the n=" + std::to_string(n_) + " lattice");
  return *i;
}

std::vector<std::int64_t> RedundancyLattice::moebius_column(std::size_t alpha) const {
  const std::size_t size = nodes_.size();
  std::vector<std::int64_t> column(size, 0);
  if (has_moebius_table()) {
    for (std::size_t b = 0; b <= alpha; ++b) column[b] = moebius_[b * size + alpha];
    return column;
  }
  // Dual recursion: μ(β,α) = -Σ_{β ≺ γ ⪯ α} μ(γ,α).
  const auto& below = down_[alpha];
  column[alpha] = 1;
  for (std::size_t b = alpha; b-- > 0;) {
    if (!below.test(b)) continue;
    std::int64_t sum = 0;
    for (std::size_t g = below.find_next(b); g != boost::dynamic_bitset<>::npos; g = below.find_next(g)) {
      if (column[g] != 0 && down_[g].test(b)) sum += column[g];
    }
    column[b] = -sum;
  }
  return column;
}

std::int64_t RedundancyLattice::moebius(std::size_t beta, std::size_t alpha) const {
  if (beta >= size() || alpha >= size()) throw Error("lattice index out of range");
  if (!leq(beta, alpha)) {
    throw Error("incomparable: " + nodes_[beta].to_string() + " is not below " + nodes_[alpha].to_string());
  }
  if (has_moebius_table()) return moebius_[beta * size() + alpha];
  return moebius_column(alpha)[beta];
}

std::int64_t RedundancyLattice::moebius(const Antichain& beta, const Antichain& alpha) const {
  return moebius(index_of(beta), index_of(alpha));
}

std::size_t RedundancyLattice::cover_count() const {
  std::size_t count = 0;
  for (const auto& c : covers_) count += c.size();
  return count;
}

std::shared_ptr<const RedundancyLattice> lattice_for(int n, LatticeLimit limit) {
  check_n(n, limit);
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const RedundancyLattice>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const RedundancyLattice>(n, limit);
  return slot;
}

}  // namespace pidkit
