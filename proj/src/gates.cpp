#include "pidkit/gates.hpp"

#include "pidkit/error.hpp"

namespace pidkit {
namespace {

std::string bit(int b) { return b ? "1" : "0"; }

Outcome row(std::vector<int> s, std::vector<int> t) {
  Outcome o;
  for (int v : s) o.sources.push_back(bit(v));
  for (int v : t) o.target.push_back(bit(v));
  return o;
}

}  // namespace

GateSpec GateSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view id = text.substr(0, colon);
  GateSpec spec;
  bool parameterized = false;
  if (id == "xor") {
    spec.kind = Kind::xor_gate;
  } else if (id == "and") {
    spec.kind = Kind::and_gate;
  } else if (id == "copy2") {
    spec.kind = Kind::copy2;
  } else if (id == "xor_source_copy") {
    spec.kind = Kind::xor_source_copy;
  } else if (id == "noisy_xor") {
    spec.kind = Kind::noisy_xor;
    parameterized = true;
  } else if (id == "corr_copy") {
    spec.kind = Kind::corr_copy;
    parameterized = true;
  } else {
    throw InputError("unknown gate '" + std::string(text) + "'");
  }
  if (parameterized) {
    if (colon == std::string_view::npos) throw InputError("gate '" + std::string(id) + "' needs a parameter, e.g. " + std::string(id) + ":1/10");
    spec.parameter = parse_rational(text.substr(colon + 1));
    if (sgn(spec.parameter) < 0 || spec.parameter > 1) throw InputError("gate parameter must lie in [0,1]");
  } else if (colon != std::string_view::npos) {
    throw InputError("gate '" + std::string(id) + "' takes no parameter");
  }
  return spec;
}

std::string GateSpec::name() const {
  switch (kind) {
    case Kind::xor_gate:
      return "xor";
    case Kind::and_gate:
      return "and";
    case Kind::copy2:
      return "copy2";
    case Kind::xor_source_copy:
      return "xor_source_copy";
    case Kind::noisy_xor:
      return "noisy_xor:" + parameter.get_str();
    case Kind::corr_copy:
      return "corr_copy:" + parameter.get_str();
  }
  return "?";
}

JointDistribution make_gate(const GateSpec& spec) {
  const Rational quarter(1, 4);
  std::vector<WeightedOutcome> rows;
  switch (spec.kind) {
    case GateSpec::Kind::xor_gate:
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rows.push_back({row({a, b}, {a ^ b}), quarter});
      return JointDistribution(2, 1, std::move(rows));
    case GateSpec::Kind::and_gate:
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rows.push_back({row({a, b}, {a & b}), quarter});
      return JointDistribution(2, 1, std::move(rows));
    case GateSpec::Kind::copy2:
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rows.push_back({row({a, b}, {a, b}), quarter});
      return JointDistribution(2, 2, std::move(rows));
    case GateSpec::Kind::xor_source_copy:
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rows.push_back({row({a, b, a ^ b}, {a, b, a ^ b}), quarter});
      return JointDistribution(3, 3, std::move(rows));
    case GateSpec::Kind::noisy_xor: {
      const Rational eps = spec.parameter;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          rows.push_back({row({a, b}, {a ^ b}), quarter * (1 - eps)});
          rows.push_back({row({a, b}, {1 - (a ^ b)}), quarter * eps});
        }
      return JointDistribution(2, 1, std::move(rows));
    }
    case GateSpec::Kind::corr_copy: {
      const Rational q = spec.parameter;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const Rational p = a == b ? Rational(q / 2) : Rational((1 - q) / 2);
          rows.push_back({row({a, b}, {a, b}), p});
        }
      return JointDistribution(2, 2, std::move(rows));
    }
  }
  throw InputError("unknown gate kind");
}

JointDistribution make_gate(std::string_view text) { return make_gate(GateSpec::parse(text)); }

std::vector<std::string> gate_ids() {
  return {"xor", "and", "copy2", "xor_source_copy", "noisy_xor:<eps>", "corr_copy:<q>"};
}

std::vector<GateSpec> gate_corpus() {
  std::vector<GateSpec> out;
  for (const char* id : {"xor", "and", "copy2", "xor_source_copy", "noisy_xor:1/10", "corr_copy:3/4"}) {
    out.push_back(GateSpec::parse(id));
  }
  return out;
}

}  // namespace pidkit
