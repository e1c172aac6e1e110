#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "encsim/simulation.hpp"

namespace encsim {

/// Reduced two-opinion vector field with shared attention u:
///   dz1 = -d z1 + u tanh(kappa (z1 + z2))
///   dz2 = -d z2 + u tanh(kappa (z2 + z1))
struct ReducedField {
  double u = 0.0;
  double d = 1.0;
  double kappa = 1.0;

  Vec2 operator()(const Vec2& z) const;
  Eigen::Matrix2d jacobian(const Vec2& z) const;
};

/// General coupled field with distinct self/coupling weights and biases,
/// used to examine asymmetric parameter sets with the same root machinery.
struct CoupledField {
  double u = 0.0;
  double d = 1.0;
  double a_self = 1.0;
  double gamma = 1.0;
  double b1 = 0.0, b2 = 0.0;

  Vec2 operator()(const Vec2& z) const;
  Eigen::Matrix2d jacobian(const Vec2& z) const;
};

struct Equilibrium {
  double z1 = 0.0, z2 = 0.0;
  bool stable = false;
};

struct BifurcationPoint {
  double u = 0.0;
  std::vector<Equilibrium> equilibria;
};

struct BifurcationSweep {
  std::vector<BifurcationPoint> points;
  // First swept u with more than one equilibrium; negative when the sweep
  // never leaves the single-equilibrium regime.
  double detected_critical_u = -1.0;

  std::string to_csv() const;  // u,z1,z2,stable rows
};

/// Roots of the reduced field by damped Newton from a 21x21 grid over
/// [-u/d-1, u/d+1]^2, deduplicated at 1e-6 and classified by the Jacobian
/// eigenvalues. Every returned root has residual <= 1e-8. At the exact
/// critical attention d/(2*kappa) the origin is degenerate and the result is
/// a cluster spanning the flat valley around it.
std::vector<Equilibrium> find_equilibria(double u, double d, double kappa);

/// Same machinery over the general coupled field.
std::vector<Equilibrium> find_equilibria(const CoupledField& field);

BifurcationSweep bifurcation_sweep(double u_min, double u_max, int steps, double d, double kappa);

/// Encounter generator for the benchmark harness: fixed starts (0,0) and
/// (10,0) facing each other, goals sampled so both desired tracks point into
/// the other airplane's start region with mirrored angular offsets below
/// pi/6 -- the geometry that invites mutual blocking. Deterministic in seed.
Scenario generate_encounter(std::uint64_t seed, const Scenario& base);
Scenario generate_encounter(std::uint64_t seed);

struct MonteCarloRunRecord {
  std::uint64_t seed = 0;
  RunMetrics baseline;
  RunMetrics opinion;
  bool baseline_aborted = false;
  bool opinion_aborted = false;
  bool comparable = false;     // both variants had every airplane reach its goal
  double time_saving = 0.0;    // per-airplane mean of (base - opinion)/base
};

struct MonteCarloReport {
  int n_runs = 0;
  int violations = 0;       // opinion-enabled runs with min separation < 0.99 r
  int blocking_events = 0;  // opinion-enabled runs with blocking dwell > threshold
  int aborted_runs = 0;
  double mean_time_saving = 0.0;  // over comparable runs only
  int comparable_runs = 0;
  double blocking_dwell_threshold = 2.0;
  std::vector<MonteCarloRunRecord> runs;
  std::vector<double> critical_attention_candidates;  // d/(2k) for candidate kappas

  std::string to_text() const;
  std::string to_json() const;
};

/// Runs each generated encounter twice (safety filter alone, then with
/// opinions) and aggregates. Runs execute concurrently; the report is
/// deterministic in (n, base_seed).
MonteCarloReport monte_carlo(int n, std::uint64_t base_seed, const Scenario& base);

}  // namespace encsim
