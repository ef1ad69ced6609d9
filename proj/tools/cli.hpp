#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nestnorm::cli {

// Exit codes besides 0 (success) and 1 (solver error). Input covers unreadable
// files and malformed values; CLI11 keeps its own codes for parse errors.
inline constexpr int kExitInput = 2;
inline constexpr int kExitBudget = 3;

inline constexpr const char* kCsvVersion = "# nestnorm-results v1";
inline constexpr const char* kCsvColumns =
    "instance,objective,outer,epsilon,cost,oracle_cost,ratio,factor,route,wall_time_s";

// Runs the command line tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nestnorm::cli
