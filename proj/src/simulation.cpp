#include "encsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace encsim {

void Scenario::validate() const {
  safety.validate();
  opinion.validate();
  if (opinion_enabled) opinion.validate_gain_condition();
  if (airplanes.size() < 2) throw std::invalid_argument("Scenario: need at least 2 airplanes");
  if (!(dt > 0.0)) throw std::invalid_argument("Scenario: dt must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("Scenario: t_max must be positive");
  if (!(goal_radius > 0.0)) throw std::invalid_argument("Scenario: goal_radius must be positive");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("Scenario: noise_std must be >= 0");
  if (heading_mode.kind == HeadingMode::Kind::Tracked && !(heading_mode.gain > 0.0))
    throw std::invalid_argument("Scenario: tracking gain must be positive");
  std::set<int> ids;
  for (const auto& a : airplanes) {
    if (!ids.insert(a.id).second) throw std::invalid_argument("Scenario: duplicate airplane id");
    if (!a.start.allFinite() || !a.goal.allFinite())
      throw std::invalid_argument("Scenario: non-finite start or goal");
  }
  for (size_t i = 0; i < airplanes.size(); ++i)
    for (size_t j = i + 1; j < airplanes.size(); ++j)
      if ((airplanes[i].start - airplanes[j].start).squaredNorm() == 0.0)
        throw std::invalid_argument("Scenario: coincident starts");
}

Angle desired_heading(const Vec2& p, const Vec2& goal) { return bearing(p, goal); }

ModeLabel classify_mode(bool filter_active, double beta_dot, double eps_beta) {
  if (!(eps_beta > 0.0)) throw std::invalid_argument("classify_mode: eps_beta must be positive");
  if (!filter_active) return ModeLabel::Cruising;
  return std::abs(beta_dot) <= eps_beta ? ModeLabel::Blocking : ModeLabel::Avoiding;
}

bool blocking_pair_predicate(Angle theta1_star, Angle theta2_star, Angle beta_12, Angle beta_21,
                             double delta) {
  if (delta < 0.0 || delta > kPi / 2.0)
    throw std::invalid_argument("blocking_pair_predicate: delta outside [0, pi/2]");
  const double o1 = theta1_star - beta_12;
  const double o2 = theta2_star - beta_21;
  for (int s : {+1, -1}) {
    const double a = s * o1;
    const double b = -s * o2;
    if (a >= 0.0 && a < delta && b >= 0.0 && b < delta) return true;
  }
  return false;
}

std::optional<int> select_threat(const AirplaneState& self,
                                 const std::vector<AirplaneState>& others,
                                 const SafetyParams& params) {
  std::optional<int> best;
  double best_delta = 0.0, best_dist = 0.0;
  for (const auto& other : others) {
    if (other.id == self.id) continue;
    const double dist = (other.position - self.position).norm();
    if (dist == 0.0) continue;
    const double delta = half_width_delta(self.position, other.position, params);
    if (delta <= 0.0) continue;
    const bool wins = !best || delta > best_delta ||
                      (delta == best_delta &&
                       (dist < best_dist || (dist == best_dist && other.id < *best)));
    if (wins) {
      best = other.id;
      best_delta = delta;
      best_dist = dist;
    }
  }
  return best;
}

World make_world(const Scenario& scenario) {
  World w;
  w.planes.reserve(scenario.airplanes.size());
  for (const auto& spec : scenario.airplanes) {
    SimPlane p;
    p.state.id = spec.id;
    p.state.position = spec.start;
    p.state.heading = spec.heading0;
    p.state.goal = spec.goal;
    p.state.desired_heading = spec.heading0;
    p.state.nominal_heading = spec.heading0;
    p.state.safe_heading = spec.heading0;
    p.bias = spec.bias;
    w.planes.push_back(p);
  }
  return w;
}

namespace {

double min_pairwise_separation(const World& w) {
  double msep = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < w.planes.size(); ++i)
    for (size_t j = i + 1; j < w.planes.size(); ++j)
      msep = std::min(msep, (w.planes[i].state.position - w.planes[j].state.position).norm());
  return msep;
}

void check_arrivals(World& w, const Scenario& sc) {
  for (auto& p : w.planes) {
    if (p.arrived) continue;
    if ((p.state.goal - p.state.position).norm() <= sc.goal_radius) {
      p.arrived = true;
      p.reached = true;
      p.flight_time = std::min(w.t, sc.t_max);
      p.state.attention = 0.0;
      p.state.mode = ModeLabel::Cruising;
    }
  }
}

// Records the current snapshot into the running separation statistics and
// returns the snapshot minimum (0 when there is nothing to pair).
double note_separation(World& w, const Scenario& sc) {
  if (w.planes.size() < 2) return 0.0;
  const double msep = min_pairwise_separation(w);
  w.min_separation = std::min(w.min_separation, msep);
  if (msep < sc.safety.r - 1e-6) ++w.violation_count;
  return msep;
}

}  // namespace

bool step_world(World& w, const Scenario& sc, SimRng& rng, TrajectoryLog* log) {
  const size_t n = w.planes.size();
  const double v = sc.safety.v;

  check_arrivals(w, sc);
  const double msep_now = note_separation(w, sc);

  // Shared pre-step snapshot; every airplane decides from the same picture.
  std::vector<AirplaneState> snap(n);
  std::vector<Vec2> vel(n, Vec2::Zero());
  for (size_t i = 0; i < n; ++i) {
    snap[i] = w.planes[i].state;
    if (!w.planes[i].arrived) vel[i] = v * unit_vector(snap[i].heading);
  }
  std::vector<AirplaneState> active;  // threat candidates: everyone still flying
  for (size_t i = 0; i < n; ++i)
    if (!w.planes[i].arrived) active.push_back(snap[i]);

  struct Decision {
    Angle theta_cmd;
    bool move = false;
  };
  std::vector<Decision> decisions(n);

  for (size_t i = 0; i < n; ++i) {
    SimPlane& plane = w.planes[i];
    const AirplaneState& me = snap[i];

    if (plane.arrived) {
      if (log)
        log->rows.push_back({w.t, me.id, me.position.x(), me.position.y(), me.heading.rad(),
                             me.desired_heading.rad(), me.nominal_heading.rad(),
                             me.safe_heading.rad(), me.opinion, plane.z_est, 0.0, 0.0, 0.0, 0.0,
                             ModeLabel::Cruising, FilterBranch::Otherwise, msep_now});
      continue;
    }

    const Angle theta_star = (me.goal - me.position).squaredNorm() > 0.0
                                 ? desired_heading(me.position, me.goal)
                                 : me.heading;

    // Threat pairing: the widest-cone other airplane; absent that, the
    // nearest one still provides the logged pair diagnostics.
    const std::optional<int> threat_id = select_threat(me, active, sc.safety);
    int pair_idx = -1;
    if (threat_id) {
      for (size_t j = 0; j < n; ++j)
        if (snap[j].id == *threat_id) pair_idx = static_cast<int>(j);
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < n; ++j) {
        if (j == i || w.planes[j].arrived) continue;
        const double dist = (snap[j].position - me.position).norm();
        if (dist < best) {
          best = dist;
          pair_idx = static_cast<int>(j);
        }
      }
    }

    double delta = 0.0, g_star = 0.0, beta_dot = 0.0, u = 0.0;
    Angle theta_n = theta_star;
    OpinionParams op = sc.opinion;
    op.bias = plane.bias;

    if (pair_idx >= 0) {
      const AirplaneState& other = snap[pair_idx];
      delta = half_width_delta(me.position, other.position, sc.safety);
      beta_dot = bearing_rate(me.position, other.position, vel[i], vel[pair_idx]);
      g_star = margin_g(me.position, other.position, theta_star, sc.safety);
      u = attention(g_star, beta_dot, op);
      plane.z_est = estimate_intention(other.heading, other.position, me.position);
    } else {
      plane.z_est = 0.0;
    }

    double z = me.opinion;
    if (sc.opinion_enabled) {
      z = opinion_step({z, plane.z_est, u}, op, sc.dt).z;
      plane.quiet_time = u == 0.0 ? plane.quiet_time + sc.dt : 0.0;
      if (plane.quiet_time >= kOpinionResetTime) z = 0.0;
      if (pair_idx >= 0) {
        const Angle beta = bearing(me.position, snap[pair_idx].position);
        theta_n = guided_heading(theta_star, beta, z, op.k_z);
      }
    }

    FilterResult filtered{theta_n, false, FilterBranch::Otherwise, false};
    if (threat_id && pair_idx >= 0) {
      const int tie = sc.opinion_enabled && z < 0.0 ? -1 : +1;
      filtered = safety_filter(theta_n, me.position, snap[pair_idx].position, sc.safety, tie);
    }

    const ModeLabel mode = classify_mode(filtered.active, beta_dot);

    AirplaneState& st = plane.state;
    st.desired_heading = theta_star;
    st.nominal_heading = theta_n;
    st.safe_heading = filtered.safe_heading;
    st.opinion = z;
    st.attention = u;
    st.mode = mode;

    if (mode == ModeLabel::Blocking) {
      plane.blocking_run += sc.dt;
      plane.blocking_dwell = std::max(plane.blocking_dwell, plane.blocking_run);
    } else {
      plane.blocking_run = 0.0;
    }

    if (log)
      log->rows.push_back({w.t, me.id, me.position.x(), me.position.y(), me.heading.rad(),
                           theta_star.rad(), theta_n.rad(), filtered.safe_heading.rad(), z,
                           plane.z_est, u, delta, g_star, beta_dot, mode, filtered.branch,
                           msep_now});

    decisions[i] = {filtered.safe_heading, true};
  }

  for (size_t i = 0; i < n; ++i) {
    if (!decisions[i].move) continue;
    SimPlane& plane = w.planes[i];
    const double omega = sc.noise_std * rng.normal();
    const Angle commanded = decisions[i].theta_cmd + omega;
    plane.state = integrate_position(plane.state, commanded, sc.dt, v, sc.heading_mode);
    plane.path_length += v * sc.dt;
    if (!plane.state.position.allFinite() || !std::isfinite(plane.state.heading.rad()))
      return false;
  }

  w.t += sc.dt;
  return true;
}

RunResult run_scenario(const Scenario& scenario) {
  RunResult result;
  World w = make_world(scenario);
  SimRng rng(scenario.seed);

  const auto all_arrived = [&] {
    return std::all_of(w.planes.begin(), w.planes.end(),
                       [](const SimPlane& p) { return p.arrived; });
  };

  // The step that finds everyone arrived still scans and logs that terminal
  // snapshot, so only t_max exits need the trailing bookkeeping pass.
  bool final_state_scanned = false;
  while (w.t < scenario.t_max - 1e-9) {
    if (all_arrived()) {
      final_state_scanned = true;
      break;
    }
    if (!step_world(w, scenario, rng, &result.log)) {
      result.aborted = true;
      char buf[128];
      std::snprintf(buf, sizeof(buf), "non-finite state at t=%.6g", w.t);
      result.abort_reason = buf;
      break;
    }
  }
  if (!final_state_scanned && !result.aborted) {
    check_arrivals(w, scenario);
    note_separation(w, scenario);
  }

  result.metrics.min_separation = w.min_separation;
  result.metrics.violation_count = w.violation_count;
  for (const auto& p : w.planes) {
    AirplaneMetrics m;
    m.id = p.state.id;
    m.reached_goal = p.reached;
    m.flight_time = p.reached ? p.flight_time : scenario.t_max;
    m.path_length = p.path_length;
    m.blocking_dwell = p.blocking_dwell;
    result.metrics.airplanes.push_back(m);
  }
  return result;
}

std::string TrajectoryLog::to_csv() const {
  std::string out =
      "t,id,x,y,theta,theta_star,theta_n,theta_s,z,z_est,u,delta,g,beta_dot,mode,branch,min_sep\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%.9g,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%s,%s,"
                  "%.9g\n",
                  r.t, r.id, r.x, r.y, r.theta, r.theta_star, r.theta_n, r.theta_s, r.z, r.z_est,
                  r.u, r.delta, r.g, r.beta_dot, to_token(r.mode), to_token(r.branch), r.min_sep);
    out += buf;
  }
  return out;
}

}  // namespace encsim
