// Command-line driver, exposed as a function so tests can call it directly.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rewr {

/// Exit codes: 0 = property holds / artifact produced, 1 = property fails /
/// no labelling, 2 = usage or input error, 3 = search budget exhausted.
inline constexpr int kExitHolds = 0;
inline constexpr int kExitFails = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnknown = 3;

/// Runs one invocation. `args` excludes the program name. `in` serves as
/// stdin for file arguments given as "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace rewr
