#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace encsim::cli {

/// Runs a spec file through the simulator, writes the requested CSV/SVG
/// artifacts, prints a metrics summary. Exit 0 on success, 2 when the run
/// materially violated the safe margin, 1 on any error.
int cmd_simulate(const std::string& spec_path, bool baseline,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<std::string> out_override);

/// Seeded benchmark over generated encounters, baseline vs opinion-enabled.
/// Exit 2 when any violation or blocking event is reported.
int cmd_montecarlo(int n, std::uint64_t seed, const std::string& out_dir);

/// Equilibrium sweep of the reduced opinion system over an attention range.
int cmd_bifurcation(double d, double kappa, double u_min, double u_max, int steps,
                    const std::string& out_dir);

/// Prints the run-spec schema.
int cmd_schema();

/// Full argv entry point.
int run(int argc, char** argv);

}  // namespace encsim::cli
