#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pidkit/measure.hpp"

namespace pidkit {

/// I(a;t) for every target realization t with p(t) > 0.
class SpecificInformation {
 public:
  explicit SpecificInformation(std::map<SymbolTuple, double> values) : values_(std::move(values)) {}

  double at(const SymbolTuple& t) const { return values_.at(t); }
  const std::map<SymbolTuple, double>& values() const { return values_; }

 private:
  std::map<SymbolTuple, double> values_;
};

/// I(a;t) = Σ_{s_a} p(s_a|t) log2[ p(t|s_a) / p(t) ], in bits.
SpecificInformation specific_information(const JointDistribution& d, SourceSet a);

/// Williams–Beer I_min = Σ_t p(t) min_i I(a_i;t).
double i_min(const JointDistribution& d, std::span<const SourceSet> args);

/// Shared-exclusions redundancy: the average over support points (s,t) of
/// log2[ P(t | ∪_i {S_{a_i} = s_{a_i}}) / p(t) ].
double i_sx(const JointDistribution& d, std::span<const SourceSet> args);

class IMin final : public RedundancyMeasure {
 public:
  std::string_view id() const override { return "imin"; }
  double evaluate(const JointDistribution& d, std::span<const SourceSet> args) const override {
    return i_min(d, args);
  }
  using RedundancyMeasure::evaluate;
};

class ISx final : public RedundancyMeasure {
 public:
  std::string_view id() const override { return "isx"; }
  double evaluate(const JointDistribution& d, std::span<const SourceSet> args) const override {
    return i_sx(d, args);
  }
  using RedundancyMeasure::evaluate;
};

/// Measures by id. The builtin registry holds "imin" and "isx" and is immutable;
/// build your own instance to add plugins.
class MeasureRegistry {
 public:
  static const MeasureRegistry& builtin();

  void add(MeasurePtr measure);
  /// Throws Error for an unknown id.
  MeasurePtr get(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, MeasurePtr, std::less<>> measures_;
};

struct ConformanceViolation {
  std::string property;  // "symmetry", "self-redundancy" or "superset-invariance"
  std::string lhs_args;
  std::string rhs_args;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConformanceReport {
  std::string measure_id;
  std::size_t comparisons = 0;
  double tolerance = 1e-12;
  std::vector<ConformanceViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks symmetry, self-redundancy and superset invariance on every argument
/// tuple of one to three nonempty source sets (n <= 3).
ConformanceReport conformance_suite(const RedundancyMeasure& m, const JointDistribution& d, double tol = 1e-12);

}  // namespace pidkit
