#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pidkit/properties.hpp"

namespace pidkit::cli {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kInputError = 2, kCapacity = 3 };

/// Runs the command line `pidkit <args...>` (args without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json report_to_json(const PropertyReport& r);

/// Text rendering used by `check`: one line per report.
std::string report_line(const PropertyReport& r);

}  // namespace pidkit::cli
