#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "encsim/airplane.hpp"
#include "encsim/opinion.hpp"
#include "encsim/safety_filter.hpp"

namespace encsim {

// Bearing-rate threshold separating Blocking from Avoiding. Exact zero never
// occurs in floating point; this sits an order of magnitude below typical
// avoidance-phase bearing rates at unit speed.
inline constexpr double kBetaDotEps = 1e-3;

// Opinions are cleared after this long without attention, so a resolved
// encounter does not bias the next one.
inline constexpr double kOpinionResetTime = 1.0;

struct AirplaneSpec {
  int id = 0;
  Vec2 start = Vec2::Zero();
  Angle heading0;
  Vec2 goal = Vec2::Zero();
  double bias = 0.0;
};

struct Scenario {
  std::vector<AirplaneSpec> airplanes;
  SafetyParams safety;
  OpinionParams opinion;
  double dt = 0.01;
  double t_max = 200.0;
  double goal_radius = 0.1;
  double noise_std = 0.1;  // std of the per-step heading actuation noise, rad
  std::uint64_t seed = 1;
  bool opinion_enabled = true;
  HeadingMode heading_mode;

  /// Full configuration check: >= 2 airplanes with distinct ids and starts,
  /// positive globals, and (when opinions are on) the attention-gain condition.
  /// run_scenario itself tolerates a single airplane; this is the boundary
  /// check applied to external inputs.
  void validate() const;
};

struct LogRow {
  double t = 0.0;
  int id = 0;
  double x = 0.0, y = 0.0;
  double theta = 0.0;
  double theta_star = 0.0, theta_n = 0.0, theta_s = 0.0;
  double z = 0.0, z_est = 0.0, u = 0.0;
  double delta = 0.0, g = 0.0, beta_dot = 0.0;
  ModeLabel mode = ModeLabel::Cruising;
  FilterBranch branch = FilterBranch::Otherwise;
  double min_sep = 0.0;
};

struct TrajectoryLog {
  std::vector<LogRow> rows;

  /// CSV with the fixed header
  /// t,id,x,y,theta,theta_star,theta_n,theta_s,z,z_est,u,delta,g,beta_dot,mode,branch,min_sep
  /// floats at 9 significant digits, mode/branch as lowercase tokens.
  std::string to_csv() const;
};

struct AirplaneMetrics {
  int id = 0;
  double flight_time = 0.0;
  double path_length = 0.0;
  double blocking_dwell = 0.0;  // longest contiguous stretch in Blocking mode
  bool reached_goal = false;
};

struct RunMetrics {
  std::vector<AirplaneMetrics> airplanes;
  double min_separation = std::numeric_limits<double>::infinity();
  int violation_count = 0;  // steps where some pair dips below r - 1e-6
};

/// Deterministic Gaussian source: explicit Box-Muller over raw mt19937_64
/// bits, one draw per call, so runs are reproducible bit for bit.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

Angle desired_heading(const Vec2& p, const Vec2& goal);

ModeLabel classify_mode(bool filter_active, double beta_dot, double eps_beta = kBetaDotEps);

/// Lemma-style mutual blocking test on the two desired headings: some side s
/// puts both normalized offsets inside [0, delta) with opposite orientations.
bool blocking_pair_predicate(Angle theta1_star, Angle theta2_star, Angle beta_12, Angle beta_21,
                             double delta);

/// Picks the other airplane with the widest unsafe cone; ties broken by
/// distance, then id. Empty when every cone is closed.
std::optional<int> select_threat(const AirplaneState& self,
                                 const std::vector<AirplaneState>& others,
                                 const SafetyParams& params);

struct SimPlane {
  AirplaneState state;
  double bias = 0.0;
  bool arrived = false;
  double z_est = 0.0;
  double quiet_time = 0.0;  // contiguous time with zero attention
  double path_length = 0.0;
  double flight_time = 0.0;
  bool reached = false;
  double blocking_run = 0.0;
  double blocking_dwell = 0.0;
};

struct World {
  double t = 0.0;
  std::vector<SimPlane> planes;
  double min_separation = std::numeric_limits<double>::infinity();
  int violation_count = 0;
};

World make_world(const Scenario& scenario);

/// Advances every airplane one step from a shared pre-step snapshot:
/// desired heading, threat selection, intent estimate, attention, opinion,
/// opinion-guided heading, safety filter, heading noise, integration, mode.
/// Returns false when a state went non-finite (run must abort).
bool step_world(World& world, const Scenario& scenario, SimRng& rng, TrajectoryLog* log);

struct RunResult {
  TrajectoryLog log;
  RunMetrics metrics;
  bool aborted = false;
  std::string abort_reason;
};

/// Steps until every airplane is inside its goal radius or t reaches t_max.
/// Deterministic in (scenario, seed).
RunResult run_scenario(const Scenario& scenario);

}  // namespace encsim
