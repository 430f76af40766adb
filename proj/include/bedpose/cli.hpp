#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bedpose::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitPartialFailure = 4;

/// Runs one `bedpose` invocation; args exclude the program name. Human
/// readable progress goes to `log`, machine-readable output to files.
int run(const std::vector<std::string>& args, std::ostream& log);

}  // namespace bedpose::cli
