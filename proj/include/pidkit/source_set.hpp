#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pidkit {

inline constexpr int kMaxSources = 5;

/// A subset of source indices. Indices are 1-based in every public
/// constructor and accessor, matching the {1,2} notation; bit i-1 holds source i.
class SourceSet {
 public:
  constexpr SourceSet() = default;

  static constexpr SourceSet from_bits(std::uint32_t bits) {
    SourceSet s;
    s.bits_ = bits;
    return s;
  }

  static SourceSet of(std::initializer_list<int> indices);
  static SourceSet of(const std::vector<int>& indices);

  /// All of {1..n}.
  static constexpr SourceSet full(int n) { return from_bits((1u << n) - 1u); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int index) const { return (bits_ >> (index - 1)) & 1u; }
  constexpr bool subset_of(SourceSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr SourceSet operator|(SourceSet other) const { return from_bits(bits_ | other.bits_); }

  /// Member indices, ascending.
  std::vector<int> indices() const;

  /// "{1,2}" style; the empty set prints as "{}".
  std::string to_string() const;

  /// Lexicographic comparison of the ascending index lists, so {1} < {1,2} < {2}.
  friend std::strong_ordering operator<=>(SourceSet a, SourceSet b);
  friend constexpr bool operator==(SourceSet a, SourceSet b) { return a.bits_ == b.bits_; }

 private:
  std::uint32_t bits_ = 0;
};

/// All 2^n subsets of {1..n}, in bit order (empty set first).
std::vector<SourceSet> all_subsets(int n);

/// All nonempty subsets of {1..n}, in bit order.
std::vector<SourceSet> nonempty_subsets(int n);

/// "{1}{2,3}" rendering of an argument tuple, in the given order.
std::string tuple_to_string(std::span<const SourceSet> tuple);

}  // namespace pidkit
