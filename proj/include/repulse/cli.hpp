#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace repulse::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs one command line (args excludes the program name). Exit codes: 0 ok,
/// 1 an audit or verification found a violation, 2 usage error, 3 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repulse::cli
