#include "encsim/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "encsim/analysis.hpp"
#include "encsim/scenario_io.hpp"
#include "encsim/svg.hpp"

namespace encsim::cli {

namespace fs = std::filesystem;

namespace {

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

void print_metrics(const RunMetrics& m) {
  for (const auto& a : m.airplanes)
    std::printf("airplane %d: flight_time=%.4g path_length=%.4g blocking_dwell=%.4g reached=%s\n",
                a.id, a.flight_time, a.path_length, a.blocking_dwell,
                a.reached_goal ? "yes" : "no");
  std::printf("min_separation=%.6g\nviolation_steps=%d\n", m.min_separation, m.violation_count);
}

}  // namespace

int cmd_simulate(const std::string& spec_path, bool baseline,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<std::string> out_override) {
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", spec_path.c_str());
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  RunSpec spec;
  try {
    spec = parse_run_spec(buffer.str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  if (baseline) spec.scenario.opinion_enabled = false;
  if (seed_override) spec.scenario.seed = *seed_override;
  if (out_override) spec.output.out_dir = *out_override;

  const RunResult result = run_scenario(spec.scenario);
  if (result.aborted) {
    std::fprintf(stderr, "error: run aborted (%s)\n", result.abort_reason.c_str());
    return 1;
  }

  const std::string stem = fs::path(spec_path).stem().string();
  try {
    const fs::path dir(spec.output.out_dir);
    fs::create_directories(dir);
    bool io_ok = true;
    if (spec.output.emit_csv) io_ok &= write_file(dir / (stem + ".csv"), result.log.to_csv());
    if (spec.output.emit_svg) {
      io_ok &= write_file(dir / (stem + "_trajectories.svg"),
                          svg::trajectories(result.log, spec.scenario));
      io_ok &= write_file(dir / (stem + "_opinions.svg"), svg::opinions(result.log));
      io_ok &= write_file(dir / (stem + "_separation.svg"),
                          svg::separation(result.log, spec.scenario.safety.r));
    }
    if (!io_ok) {
      std::fprintf(stderr, "error: failed writing outputs to '%s'\n",
                   spec.output.out_dir.c_str());
      return 1;
    }
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  print_metrics(result.metrics);
  const bool material_violation =
      result.metrics.min_separation < 0.99 * spec.scenario.safety.r;
  return material_violation ? 2 : 0;
}

int cmd_montecarlo(int n, std::uint64_t seed, const std::string& out_dir) {
  if (n < 1) {
    std::fprintf(stderr, "error: montecarlo needs n >= 1\n");
    return 1;
  }
  Scenario base;  // defaults; the generator fills in the airplanes
  MonteCarloReport report;
  try {
    report = monte_carlo(n, seed, base);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    if (!write_file(dir / "mc_report.txt", report.to_text()) ||
        !write_file(dir / "mc_report.json", report.to_json())) {
      std::fprintf(stderr, "error: failed writing report to '%s'\n", out_dir.c_str());
      return 1;
    }
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  std::printf("n_runs=%d violations=%d blocking_events=%d aborted=%d mean_time_saving=%.4g\n",
              report.n_runs, report.violations, report.blocking_events, report.aborted_runs,
              report.mean_time_saving);
  return (report.violations > 0 || report.blocking_events > 0) ? 2 : 0;
}

int cmd_bifurcation(double d, double kappa, double u_min, double u_max, int steps,
                    const std::string& out_dir) {
  BifurcationSweep sweep;
  try {
    sweep = bifurcation_sweep(u_min, u_max, steps, d, kappa);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    if (!write_file(dir / "bifurcation.csv", sweep.to_csv()) ||
        !write_file(dir / "bifurcation.svg", svg::bifurcation(sweep))) {
      std::fprintf(stderr, "error: failed writing sweep to '%s'\n", out_dir.c_str());
      return 1;
    }
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  std::printf("critical_attention_formula=%.6g detected_onset=%.6g\n",
              critical_attention(d, kappa), sweep.detected_critical_u);
  return 0;
}

int cmd_schema() {
  std::fputs(run_spec_schema().c_str(), stdout);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Two-airplane conflict resolution simulator: CBF safety filter with "
               "opinion-guided blocking resolution"};
  app.require_subcommand(1);

  std::string spec_path, out_dir = "out";
  bool baseline = false;
  std::uint64_t seed = 42;
  std::string out_override;

  auto* sim = app.add_subcommand("simulate", "Run a scenario spec file");
  sim->add_option("spec", spec_path, "Path to the JSON run spec")->required();
  sim->add_flag("--baseline", baseline, "Disable opinion dynamics");
  auto* seed_opt = sim->add_option("--seed", seed, "Override the scenario seed");
  auto* out_opt = sim->add_option("--out", out_override, "Override the output directory");

  int mc_n = 200;
  std::uint64_t mc_seed = 42;
  auto* mc = app.add_subcommand("montecarlo", "Benchmark generated encounters");
  mc->add_option("n", mc_n, "Number of encounters")->required();
  mc->add_option("seed", mc_seed, "Base seed")->required();
  mc->add_option("--out", out_dir, "Output directory");

  double bf_d = 1.0, bf_kappa = 1.0, bf_umin = 0.0, bf_umax = 1.0;
  int bf_steps = 100;
  auto* bf = app.add_subcommand("bifurcation", "Sweep opinion equilibria over attention");
  bf->add_option("d", bf_d, "Damping")->required();
  bf->add_option("kappa", bf_kappa, "Shared self/coupling weight")->required();
  bf->add_option("u_min", bf_umin, "Sweep start")->required();
  bf->add_option("u_max", bf_umax, "Sweep end")->required();
  bf->add_option("steps", bf_steps, "Number of sweep points")->required();
  bf->add_option("--out", out_dir, "Output directory");

  auto* schema = app.add_subcommand("schema", "Print the run-spec schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (sim->parsed())
    return cmd_simulate(spec_path, baseline,
                        seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
                        out_opt->count() ? std::optional<std::string>(out_override)
                                         : std::nullopt);
  if (mc->parsed()) return cmd_montecarlo(mc_n, mc_seed, out_dir);
  if (bf->parsed()) return cmd_bifurcation(bf_d, bf_kappa, bf_umin, bf_umax, bf_steps, out_dir);
  if (schema->parsed()) return cmd_schema();
  return 1;
}

}  // namespace encsim::cli
