#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conjtime/ode.hpp"
#include "conjtime/young_diagram.hpp"

namespace conjtime {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitVacuous = 2,
  kExitNumerical = 3,
};

/// Parsed command line. Model parameters stay textual until the subcommand
/// knows whether it expects a scalar or a list.
struct RunConfig {
  std::string subcommand;
  OdeTolerances tol;
  double refinement = 1e-10;
  double horizon = 50.0;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 20261016;
  int jobs = 0;  // 0 selects min(hardware threads, 8)

  std::optional<std::string> rows, q, kappas, l, level, bound, field, r;
  std::optional<std::string> chi, kappa, h0, h1, h2, energy, h0_sign, h1_sign;
};

/// Parses `args` (without the program name), runs the subcommand and returns
/// an ExitCode. Results go to `out` (or the --output file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" or "start:stop:count" (inclusive linspace).
std::vector<double> parse_number_list(const std::string& text);
/// Parses "a,b;c,d" (rows separated by ';') or a JSON array of arrays.
Matrix parse_matrix(const std::string& text);

}  // namespace conjtime
