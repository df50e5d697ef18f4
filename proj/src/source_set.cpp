#include "pidkit/source_set.hpp"

#include <algorithm>

#include "pidkit/error.hpp"

namespace pidkit {

SourceSet SourceSet::of(std::initializer_list<int> indices) {
  return of(std::vector<int>(indices));
}

SourceSet SourceSet::of(const std::vector<int>& indices) {
  std::uint32_t bits = 0;
  for (int i : indices) {
    if (i < 1 || i > kMaxSources) {
      throw Error("source index " + std::to_string(i) + " outside 1.." + std::to_string(kMaxSources));
    }
    bits |= 1u << (i - 1);
  }
  return from_bits(bits);
}

std::vector<int> SourceSet::indices() const {
  std::vector<int> out;
  for (int i = 1; i <= kMaxSources; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string SourceSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int i : indices()) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

std::strong_ordering operator<=>(SourceSet a, SourceSet b) {
  const auto ia = a.indices();
  const auto ib = b.indices();
  return std::lexicographical_compare_three_way(ia.begin(), ia.end(), ib.begin(), ib.end());
}

std::vector<SourceSet> all_subsets(int n) {
  std::vector<SourceSet> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) out.push_back(SourceSet::from_bits(b));
  return out;
}

std::vector<SourceSet> nonempty_subsets(int n) {
  auto out = all_subsets(n);
  out.erase(out.begin());
  return out;
}

std::string tuple_to_string(std::span<const SourceSet> tuple) {
  std::string s;
  for (const auto& a : tuple) s += a.to_string();
  return s;
}

}  // namespace pidkit
