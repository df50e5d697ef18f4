#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "pidkit/lattice.hpp"
#include "pidkit/prob.hpp"

namespace pidkit {

/// A redundancy functional I_∩(a_1..a_m; T) of a joint distribution, in bits.
/// Implementations take an arbitrary argument tuple (possibly unsorted or with
/// dominated members) so symmetry and superset invariance can be tested.
class RedundancyMeasure {
 public:
  virtual ~RedundancyMeasure() = default;

  virtual std::string_view id() const = 0;
  virtual double evaluate(const JointDistribution& d, std::span<const SourceSet> args) const = 0;

  double evaluate(const JointDistribution& d, const Antichain& alpha) const {
    return evaluate(d, alpha.members());
  }
};

using MeasurePtr = std::shared_ptr<const RedundancyMeasure>;

}  // namespace pidkit
