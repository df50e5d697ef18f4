#include "pidkit/distribution_io.hpp"

#include <fstream>
#include <sstream>

#include "pidkit/error.hpp"

namespace pidkit {
namespace {

using nlohmann::json;

Symbol symbol_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError("symbol must be a string or an integer, got " + j.dump());
}

json symbol_to_json(const Symbol& s) {
  const bool canonical_int =
      !s.empty() && s.size() <= 18 && (s == "0" || (s[0] != '0' && s.find_first_not_of("0123456789") == std::string::npos));
  if (canonical_int) return std::stoll(s);
  return s;
}

SymbolTuple tuple_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw InputError(std::string("field '") + field + "' must be an array");
  SymbolTuple out;
  for (const auto& v : j) out.push_back(symbol_from_json(v));
  return out;
}

int positive_int(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number_integer()) {
    throw InputError(std::string("missing integer field '") + field + "'");
  }
  return j.at(field).get<int>();
}

}  // namespace

JointDistribution distribution_from_json(const json& j) {
  if (!j.is_object()) throw InputError("distribution must be a JSON object");
  const int n = positive_int(j, "n_sources");
  const int k = positive_int(j, "target_arity");
  if (!j.contains("outcomes") || !j.at("outcomes").is_array()) {
    throw InputError("missing array field 'outcomes'");
  }
  std::vector<WeightedOutcome> rows;
  std::size_t index = 0;
  for (const auto& row : j.at("outcomes")) {
    try {
      if (!row.is_object() || !row.contains("s") || !row.contains("t") || !row.contains("p")) {
        throw InputError("needs fields 's', 't' and 'p'");
      }
      Outcome o{tuple_from_json(row.at("s"), "s"), tuple_from_json(row.at("t"), "t"), std::nullopt};
      if (row.contains("z") && !row.at("z").is_null()) o.aux = symbol_from_json(row.at("z"));
      const auto& p = row.at("p");
      Rational prob;
      if (p.is_string()) {
        prob = parse_rational(p.get<std::string>());
      } else if (p.is_number_integer()) {
        prob = Rational(p.get<long>());
      } else {
        throw InputError("'p' must be a string such as \"1/4\" or \"0.25\"");
      }
      rows.push_back({std::move(o), std::move(prob)});
    } catch (const InputError& e) {
      throw InputError("outcome " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return JointDistribution(n, k, std::move(rows));
}

json distribution_to_json(const JointDistribution& d) {
  json rows = json::array();
  for (const auto& [o, p] : d.outcomes()) {
    json row;
    row["s"] = json::array();
    for (const auto& s : o.sources) row["s"].push_back(symbol_to_json(s));
    row["t"] = json::array();
    for (const auto& t : o.target) row["t"].push_back(symbol_to_json(t));
    if (o.aux) row["z"] = symbol_to_json(*o.aux);
    row["p"] = to_string(p);
    rows.push_back(std::move(row));
  }
  json out;
  out["n_sources"] = d.n_sources();
  out["target_arity"] = d.target_arity();
  out["outcomes"] = std::move(rows);
  return out;
}

JointDistribution parse_distribution(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
  return distribution_from_json(j);
}

JointDistribution load_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_distribution(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_distribution(const JointDistribution& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << distribution_to_json(d).dump(2) << '\n';
}

}  // namespace pidkit
