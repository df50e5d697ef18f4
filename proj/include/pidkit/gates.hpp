#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pidkit/prob.hpp"
#include "pidkit/rational.hpp"

namespace pidkit {

/// Canonical gate distributions over fair binary sources.
///
///   xor              T = S1 ⊕ S2
///   and              T = S1 ∧ S2
///   copy2            T = (S1, S2), independent sources
///   xor_source_copy  S3 = S1 ⊕ S2, T = (S1, S2, S3)
///   noisy_xor:eps    T = S1 ⊕ S2 ⊕ N with N ~ Bern(eps)
///   corr_copy:q      P(S1 = S2) = q, fair marginals, T = (S1, S2)
struct GateSpec {
  enum class Kind { xor_gate, and_gate, copy2, xor_source_copy, noisy_xor, corr_copy };

  Kind kind = Kind::xor_gate;
  Rational parameter = 0;

  /// Parses "xor", "noisy_xor:1/10", ... Throws InputError on unknown ids or a
  /// parameter outside [0,1].
  static GateSpec parse(std::string_view text);

  std::string name() const;
};

JointDistribution make_gate(const GateSpec& spec);
JointDistribution make_gate(std::string_view text);

/// Ids accepted by GateSpec::parse (parameterized ones shown with an example).
std::vector<std::string> gate_ids();

/// Corpus used by the property matrix: xor, and, copy2, xor_source_copy,
/// noisy_xor:1/10, corr_copy:3/4.
std::vector<GateSpec> gate_corpus();

}  // namespace pidkit
