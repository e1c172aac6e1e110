#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "encsim/analysis.hpp"
#include "encsim/scenarios.hpp"

using namespace encsim;

namespace {

constexpr int kEncounters = 200;
constexpr std::uint64_t kBaseSeed = 42;

void report(int number, const char* label, bool ok) {
  std::printf("acceptance %d (%s): %s\n", number, label, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
}

double max_dwell(const RunMetrics& m) {
  double d = 0.0;
  for (const auto& a : m.airplanes) d = std::max(d, a.blocking_dwell);
  return d;
}

bool everyone_reached(const RunMetrics& m) {
  for (const auto& a : m.airplanes)
    if (!a.reached_goal) return false;
  return true;
}

struct EncounterSweep {
  std::vector<RunMetrics> quiet;  // opinion-enabled, zero noise
  std::vector<RunMetrics> noisy;  // opinion-enabled, noise std 0.1
  double seconds = 0.0;
};

const EncounterSweep& encounter_sweep() {
  static const EncounterSweep sweep = [] {
    EncounterSweep s;
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < kEncounters; ++k) {
      Scenario base;
      base.noise_std = 0.0;
      Scenario quiet = generate_encounter(kBaseSeed + k, base);
      s.quiet.push_back(run_scenario(quiet).metrics);
      Scenario noisy = quiet;
      noisy.noise_std = 0.1;
      s.noisy.push_back(run_scenario(noisy).metrics);
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
  }();
  return sweep;
}

}  // namespace

TEST_CASE("1: safety margin invariance across generated encounters") {
  const auto& sweep = encounter_sweep();
  const double r = Scenario{}.safety.r;

  bool ok = sweep.seconds < 60.0;
  for (const auto& m : sweep.quiet) ok = ok && m.min_separation >= r - 1e-6;
  for (const auto& m : sweep.noisy) ok = ok && m.min_separation >= 0.99 * r;

  report(1, "safety margin maintained in 200 encounters, quiet and noisy", ok);
  for (const auto& m : sweep.quiet) CHECK(m.min_separation >= r - 1e-6);
  for (const auto& m : sweep.noisy) CHECK(m.min_separation >= 0.99 * r);
  CHECK(sweep.seconds < 60.0);
}

TEST_CASE("2: opinions eliminate blocking that the baseline exhibits") {
  const auto& sweep = encounter_sweep();

  int dwell_violations = 0;
  for (const auto& m : sweep.quiet)
    if (max_dwell(m) > 2.0) ++dwell_violations;
  for (const auto& m : sweep.noisy)
    if (max_dwell(m) > 2.0) ++dwell_violations;

  Scenario baseline_case = scenarios::case_study();
  baseline_case.opinion_enabled = false;
  const RunMetrics base = run_scenario(baseline_case).metrics;

  const bool ok = dwell_violations == 0 && max_dwell(base) >= 5.0;
  report(2, "no blocking dwell over 2 with opinions; baseline case dwells over 5", ok);
  CHECK(dwell_violations == 0);
  CHECK(max_dwell(base) >= 5.0);
}

TEST_CASE("3: opinion guidance saves flight time") {
  Scenario base;  // default noise (std 0.1), the experiment setting
  const MonteCarloReport rep = monte_carlo(kEncounters, kBaseSeed, base);

  Scenario with_op = scenarios::case_study();
  Scenario without = scenarios::case_study();
  without.opinion_enabled = false;
  const RunMetrics mo = run_scenario(with_op).metrics;
  const RunMetrics mb = run_scenario(without).metrics;

  REQUIRE(everyone_reached(mo));
  REQUIRE(everyone_reached(mb));
  // airplane 1 takes the detour in the resolved case study; airplane 2 keeps
  // its track (its flight time is the one the stand-off hurt most)
  const double save_yielder =
      (mb.airplanes[0].flight_time - mo.airplanes[0].flight_time) / mb.airplanes[0].flight_time;
  const double save_other =
      (mb.airplanes[1].flight_time - mo.airplanes[1].flight_time) / mb.airplanes[1].flight_time;

  const bool ok = rep.mean_time_saving >= 0.10 && rep.comparable_runs > 0 &&
                  save_yielder >= 0.0 && save_other >= 0.15;
  report(3, "mean time saving >= 10%; case-study savings split", ok);
  CHECK(rep.mean_time_saving >= 0.10);
  CHECK(rep.comparable_runs > 0);
  CHECK(save_yielder >= 0.0);
  CHECK(save_other >= 0.15);
}

TEST_CASE("4: pitchfork onset of the reduced opinion system") {
  const auto sweep = bifurcation_sweep(0.0, 1.0, 100, 1.0, 1.0);
  bool ok = sweep.detected_critical_u >= 0.49 && sweep.detected_critical_u <= 0.51;

  const auto eqs = find_equilibria(1.0, 1.0, 1.0);
  ok = ok && eqs.size() == 3;
  int stable_nonzero = 0;
  bool origin_unstable = false;
  double worst_residual = 0.0;
  const ReducedField field{1.0, 1.0, 1.0};
  for (const auto& eq : eqs) {
    worst_residual = std::max(worst_residual, field(Vec2(eq.z1, eq.z2)).norm());
    if (std::abs(eq.z1) < 1e-9) {
      origin_unstable = !eq.stable;
    } else if (eq.stable) {
      ++stable_nonzero;
      ok = ok && eq.z1 * eq.z2 > 0.0;
    }
  }
  ok = ok && stable_nonzero == 2 && origin_unstable && worst_residual <= 1e-8;

  report(4, "branch onset in [0.49, 0.51]; two stable consensus branches at u=1", ok);
  CHECK(sweep.detected_critical_u >= 0.49);
  CHECK(sweep.detected_critical_u <= 0.51);
  CHECK(eqs.size() == 3);
  CHECK(stable_nonzero == 2);
  CHECK(origin_unstable);
  CHECK(worst_residual <= 1e-8);
}

TEST_CASE("5: closed-form filter matches the brute-force program") {
  const auto t0 = std::chrono::steady_clock::now();
  SafetyParams sp;
  std::mt19937 gen(20240717);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> dist(sp.r, sp.r + 4.0);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);

  double worst = 0.0;
  int n = 0;
  while (n < 10000) {
    const Vec2 p_i(coord(gen), coord(gen));
    const Vec2 p_j = p_i + dist(gen) * unit_vector(Angle(angle(gen)));
    const Angle theta_star(angle(gen));
    if (barrier_h(p_i, p_j, sp) < 0.0) continue;
    if (theta_star - bearing(p_i, p_j) == 0.0) continue;  // tie branch excluded
    ++n;
    const auto closed = safety_filter(theta_star, p_i, p_j, sp);
    const auto oracle = qp_oracle_filter(theta_star, p_i, p_j, sp);
    worst = std::max(worst,
                     std::abs(normalize_angle(closed.safe_heading.rad() - oracle.front())));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const bool ok = worst <= 1e-4 && seconds < 10.0;
  report(5, "10^4 random states agree within 1e-4 rad", ok);
  CHECK(worst <= 1e-4);
  CHECK(seconds < 10.0);
}

TEST_CASE("6: noise breaks the symmetric stand-off both ways") {
  int cw = 0, ccw = 0;
  for (int s = 1; s <= 100; ++s) {
    const Scenario sc = scenarios::symmetric_head_on(s);
    const RunResult rr = run_scenario(sc);
    if (!everyone_reached(rr.metrics)) continue;
    double rotation = 0.0;
    for (const auto& row : rr.log.rows)
      if (row.id == 1) rotation += row.beta_dot * sc.dt;
    (rotation < 0.0 ? cw : ccw)++;
  }
  const bool ok = cw >= 20 && ccw >= 20;
  report(6, "both swap orientations occur at least 20 times in 100", ok);
  CHECK(cw >= 20);
  CHECK(ccw >= 20);
}

TEST_CASE("7: a strong bias dictates the side and the other airplane adapts") {
  bool ok = true;
  for (double b1 : {+10.0, -10.0}) {
    for (int s = 1; s <= 20; ++s) {
      const Scenario sc = scenarios::case_study_biased(b1, s);
      const RunResult rr = run_scenario(sc);
      double rotation = 0.0, z2_extreme = 0.0;
      for (const auto& row : rr.log.rows) {
        if (row.id == 1) rotation += row.beta_dot * sc.dt;
        if (row.id == 2 && std::abs(row.z) > std::abs(z2_extreme)) z2_extreme = row.z;
      }
      // positive opinions (right bypass) rotate the pair axis clockwise
      const bool side_ok = (b1 > 0.0) == (rotation < 0.0);
      const bool adapted = (b1 > 0.0) == (z2_extreme > 0.0);
      ok = ok && side_ok && adapted && everyone_reached(rr.metrics);
      CHECK(side_ok);
      CHECK(adapted);
      CHECK(everyone_reached(rr.metrics));
    }
  }
  report(7, "20/20 biased runs resolve on the dictated side, partner matching", ok);
}

TEST_CASE("8: eight airplanes exchange positions safely") {
  const Scenario sc = scenarios::ring_exchange(8);
  const RunResult rr = run_scenario(sc);

  bool ok = !rr.aborted && everyone_reached(rr.metrics) && rr.metrics.violation_count == 0 &&
            rr.metrics.min_separation >= sc.safety.r - 1e-6;

  // one row per airplane per step implies one threat pairing per airplane
  std::set<std::pair<double, int>> seen;
  for (const auto& row : rr.log.rows)
    if (!seen.insert({row.t, row.id}).second) ok = false;

  report(8, "all eight reach goals with zero separation violations", ok);
  CHECK(!rr.aborted);
  CHECK(everyone_reached(rr.metrics));
  CHECK(rr.metrics.violation_count == 0);
  CHECK(rr.metrics.min_separation >= sc.safety.r - 1e-6);
  CHECK(seen.size() == rr.log.rows.size());
}

TEST_CASE("9: module invariants hold as bulk property checks") {
  std::mt19937 gen(99);
  bool angles_ok = true, bearings_ok = true, speed_ok = true, filter_ok = true,
       opinion_ok = true, pitchfork_ok = true, determinism_ok = true;

  {  // angle normalization: periodicity and range, 2000 cases
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_int_distribution<int> turns(-1000, 1000);
    for (int i = 0; i < 2000; ++i) {
      const double a = angle(gen);
      const double b = normalize_angle(a + kTwoPi * turns(gen));
      angles_ok = angles_ok && std::abs(normalize_angle(b - a)) < 1e-9 && b >= -kPi && b < kPi;
    }
  }
  {  // bearing antisymmetry + bearing-rate pair symmetry, 2000 cases
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
      const Vec2 p(coord(gen), coord(gen)), q(coord(gen), coord(gen));
      if ((p - q).norm() < 1e-6) continue;
      bearings_ok = bearings_ok &&
                    std::abs(normalize_angle(bearing(p, q).rad() -
                                             normalize_angle(bearing(q, p).rad() + kPi))) <
                        1e-12;
      const Vec2 vp(coord(gen), coord(gen)), vq(coord(gen), coord(gen));
      bearings_ok = bearings_ok && bearing_rate(p, q, vp, vq) == bearing_rate(q, p, vq, vp);
    }
  }
  {  // constant-speed steps, 1000 cases
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
      AirplaneState s;
      s.position = Vec2(coord(gen), coord(gen));
      s.heading = Angle(coord(gen));
      const auto next = integrate_position(s, Angle(coord(gen)), 0.01, 1.0);
      speed_ok = speed_ok && std::abs((next.position - s.position).norm() - 0.01) <= 1e-14;
    }
  }
  {  // filter feasibility, delta range and monotonicity, mirror symmetry
    SafetyParams sp;
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> dist(sp.r * 1.0001, sp.r + 4.0);
    for (int i = 0; i < 2000; ++i) {
      const Vec2 p_i(0, 0);
      const Vec2 p_j = dist(gen) * unit_vector(Angle(angle(gen)));
      const Angle theta(angle(gen));
      const auto res = safety_filter(theta, p_i, p_j, sp);
      filter_ok = filter_ok && margin_g(p_i, p_j, res.safe_heading, sp) >= -1e-9;
      const double d = half_width_delta(p_i, p_j, sp);
      filter_ok = filter_ok && d >= 0.0 && d <= kPi / 2.0;
    }
    for (int i = 0; i < 1000; ++i) {  // mirror across the pair axis
      const Vec2 p_i(0, 0), p_j(dist(gen), 0);
      const Angle theta(angle(gen));
      const auto res = safety_filter(theta, p_i, p_j, sp, +1);
      const auto mir = safety_filter(Angle(-theta.rad()), p_i, p_j, sp, -1);
      filter_ok =
          filter_ok &&
          std::abs(normalize_angle(mir.safe_heading.rad() + res.safe_heading.rad())) < 1e-9;
      if (res.branch == FilterBranch::PlusDelta)
        filter_ok = filter_ok && mir.branch == FilterBranch::MinusDelta;
    }
    double prev = kPi;  // delta monotonic in separation
    for (int k = 0; k <= 1000; ++k) {
      const double d = half_width_delta({0, 0}, {sp.r + 6.0 * k / 1000.0, 0}, sp);
      filter_ok = filter_ok && d <= prev + 1e-12;
      prev = d;
    }
  }
  {  // opinion decay, odd symmetry, guided-heading continuity, gain condition
    OpinionParams op;
    std::uniform_real_distribution<double> z0(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int i = 0; i < 1000; ++i) {
      OpinionState s{z0(gen), 0.0, 0.0};
      const double before = std::abs(s.z);
      opinion_ok = opinion_ok && std::abs(opinion_step(s, op, 0.01).z) <= before;

      const Angle ts(angle(gen)), b(angle(gen));
      const double above = guided_heading(ts, b, 1e-8, op.k_z).rad();
      const double below = guided_heading(ts, b, -1e-8, op.k_z).rad();
      opinion_ok = opinion_ok && std::abs(normalize_angle(above - below)) < 1e-6;
    }
    for (int i = 0; i < 1000; ++i) {
      OpinionState a{z0(gen), z0(gen), 2.0};
      OpinionState m{-a.z, -a.z_other_est, 2.0};
      opinion_ok = opinion_ok && std::abs(opinion_step(a, op, 0.01).z +
                                          opinion_step(m, op, 0.01).z) <= 1e-12;
    }
    opinion_ok = opinion_ok && op.k1 / op.k2 > critical_attention(op.d, op.a_self) &&
                 op.k1 / op.k2 > critical_attention(op.d, op.gamma) &&
                 op.k1 / op.k2 > critical_attention(op.d, 0.5 * (op.a_self + op.gamma));
  }
  {  // pitchfork symmetry of the analysis module over a sweep; the grid
     // avoids the exact critical point, where roots form a flat cluster
    const auto sweep = bifurcation_sweep(0.06, 1.56, 31, 1.0, 1.0);
    for (const auto& pt : sweep.points)
      for (const auto& eq : pt.equilibria) {
        bool mirrored = false;
        for (const auto& other : pt.equilibria)
          if (std::abs(other.z1 + eq.z1) < 1e-7 && std::abs(other.z2 + eq.z2) < 1e-7)
            mirrored = true;
        pitchfork_ok = pitchfork_ok && mirrored;
      }
  }
  {  // determinism of a full scenario run
    const Scenario sc = scenarios::symmetric_head_on(12345);
    determinism_ok = run_scenario(sc).log.to_csv() == run_scenario(sc).log.to_csv();
  }

  const bool ok = angles_ok && bearings_ok && speed_ok && filter_ok && opinion_ok &&
                  pitchfork_ok && determinism_ok;
  report(9, "bulk invariant suites (angles, filter, opinions, analysis, determinism)", ok);
  CHECK(angles_ok);
  CHECK(bearings_ok);
  CHECK(speed_ok);
  CHECK(filter_ok);
  CHECK(opinion_ok);
  CHECK(pitchfork_ok);
  CHECK(determinism_ok);
}
