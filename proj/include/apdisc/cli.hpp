#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apdisc {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvSchema = "apdisc-csv-1";

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

// Subcommands: color, eval, bounds, verify, sweep, lll. args excludes the
// program name. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Least-squares slope of log y on log x with a normal-approximation 95% interval.
struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double lo = 0;
  double hi = 0;
  std::size_t points = 0;
};

SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace apdisc
