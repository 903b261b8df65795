#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grasp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command line (without the program name). Usage errors and invalid inputs
/// return kExitInvalid with the offending flag named on `err`; failures after validation
/// return kExitRuntime. Output files are written atomically.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grasp::cli
