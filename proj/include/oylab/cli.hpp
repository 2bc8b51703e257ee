#pragma once

// Command-line frontend. Five subcommands cover the pipeline end to end:
//
//   growth          admissibility, reciprocal-integral classification, F table
//   slowdown        splice ledger, H table, construction property report
//   riccati         comparison ODE trace and the (sqrt(n-1)+1) G bound report
//   sweep           touching-family certificates for a bounded radial g
//   counterexample  slowed profile -> warped model -> bounded h with
//                   Laplacian pinned above 1 near its supremum
//
// Every command writes machine-readable artifacts (JSON reports, CSV tables)
// into the output directory and prints a terminal summary. Artifacts are
// deterministic: same invocation, same bytes.
//
// Exit codes: 0 when every checked property holds, 1 for usage, input, or
// numerical errors (no verdict), 2 when a computed property fails.

#include <string>
#include <vector>

namespace oylab {

// `args` holds the command-line tokens after the program name.
int run_cli(std::vector<std::string> args);

}  // namespace oylab
