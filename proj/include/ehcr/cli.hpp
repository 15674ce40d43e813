#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ehcr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitValidationFailed = 3;

/// Entry point of the `ehcr` tool. args excludes the program name. CSV goes
/// to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.9g formatting used for every CSV number.
std::string format_number(double v);

}  // namespace ehcr::cli
