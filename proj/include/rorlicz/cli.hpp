#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rorlicz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command line (without the program name). Reports go to `out`
/// (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rorlicz::cli
