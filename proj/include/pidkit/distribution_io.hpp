#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "pidkit/prob.hpp"

namespace pidkit {

// Distribution file format:
//   { "n_sources": 2, "target_arity": 1,
//     "outcomes": [ { "s": [0, 1], "t": [1], "z": "a", "p": "1/4" }, ... ] }
// "z" is optional; "p" is "num/den" or a decimal string (converted exactly).
// Symbols may be JSON integers or strings.

JointDistribution distribution_from_json(const nlohmann::json& j);
nlohmann::json distribution_to_json(const JointDistribution& d);

JointDistribution parse_distribution(const std::string& text);
JointDistribution load_distribution(const std::filesystem::path& path);
void save_distribution(const JointDistribution& d, const std::filesystem::path& path);

}  // namespace pidkit
