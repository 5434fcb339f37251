#pragma once

#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace torsionlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBudget = 2,
  kExitVerifyFailed = 3,
};

/// Entry point behind the `torsionlab` binary. Data goes to `out` (or --out),
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "num/den", an integer, or a decimal such as "0.125" or "2.5e-3", converted
/// exactly. Throws ParameterError.
mpq_class parse_rational(const std::string& text);

}  // namespace torsionlab
