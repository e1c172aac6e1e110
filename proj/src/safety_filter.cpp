#include "encsim/safety_filter.hpp"

#include <algorithm>
#include <cmath>

namespace encsim {

void SafetyParams::validate() const {
  if (!(r > 0.0)) throw std::invalid_argument("SafetyParams: r must be positive");
  if (!(v > 0.0)) throw std::invalid_argument("SafetyParams: v must be positive");
  if (!(alpha_cbf > 0.0)) throw std::invalid_argument("SafetyParams: alpha_cbf must be positive");
  if (!(g_tolerance >= 0.0)) throw std::invalid_argument("SafetyParams: g_tolerance must be >= 0");
}

const char* to_token(FilterBranch b) {
  switch (b) {
    case FilterBranch::Otherwise: return "otherwise";
    case FilterBranch::PlusDelta: return "plus_delta";
    case FilterBranch::MinusDelta: return "minus_delta";
    case FilterBranch::TieBreak: return "tie_break";
  }
  return "?";
}

double barrier_h(const Vec2& p1, const Vec2& p2, const SafetyParams& params) {
  return (p1 - p2).squaredNorm() - params.r * params.r;
}

double margin_g(const Vec2& p_i, const Vec2& p_j, Angle theta, const SafetyParams& params) {
  const Vec2 d = p_i - p_j;
  if (d.squaredNorm() == 0.0) throw std::invalid_argument("margin_g: coincident points");
  return 0.5 * params.alpha_cbf * barrier_h(p_i, p_j, params) +
         2.0 * params.v * d.dot(unit_vector(theta));
}

double half_width_delta(const Vec2& p_i, const Vec2& p_j, const SafetyParams& params) {
  const double dist = (p_i - p_j).norm();
  if (dist == 0.0) throw std::invalid_argument("half_width_delta: coincident points");
  const double arg = params.alpha_cbf * barrier_h(p_i, p_j, params) / (4.0 * params.v * dist);
  return std::acos(std::clamp(arg, 0.0, 1.0));
}

FilterResult safety_filter(Angle theta_star, const Vec2& p_i, const Vec2& p_j,
                           const SafetyParams& params, int tie_hint) {
  if ((p_i - p_j).squaredNorm() == 0.0)
    throw std::invalid_argument("safety_filter: coincident points");

  const int tie = tie_hint >= 0 ? +1 : -1;
  const Angle beta = bearing(p_i, p_j);
  const double h = barrier_h(p_i, p_j, params);

  if (h < 0.0) {
    // Already inside the margin; command pure evasion and report it.
    return {beta + tie * (kPi / 2.0), true,
            tie > 0 ? FilterBranch::PlusDelta : FilterBranch::MinusDelta, true};
  }

  const double delta = half_width_delta(p_i, p_j, params);
  if (delta == 0.0) return {theta_star, false, FilterBranch::Otherwise, false};

  const double offset = theta_star - beta;
  if (offset == 0.0) return {beta + tie * delta, true, FilterBranch::TieBreak, false};
  if (offset > 0.0 && offset < delta) return {beta + delta, true, FilterBranch::PlusDelta, false};
  if (offset < 0.0 && offset > -delta)
    return {beta - delta, true, FilterBranch::MinusDelta, false};
  return {theta_star, false, FilterBranch::Otherwise, false};
}

namespace {

// Walks the 1e-4 grid away from theta_star until the constraint is satisfied,
// then bisects the bracketing interval down to the boundary.
double boundary_toward(double theta_star, double step, const Vec2& p_i, const Vec2& p_j,
                       const SafetyParams& params, bool* found) {
  const int max_steps = static_cast<int>(std::ceil(kTwoPi / std::abs(step))) + 1;
  double lo = theta_star;  // infeasible side
  for (int k = 1; k <= max_steps; ++k) {
    const double cand = theta_star + k * step;
    if (margin_g(p_i, p_j, Angle(cand), params) >= 0.0) {
      double hi = cand;  // feasible side
      while (std::abs(hi - lo) > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (margin_g(p_i, p_j, Angle(mid), params) >= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      *found = true;
      return hi;
    }
    lo = cand;
  }
  *found = false;
  return theta_star;
}

}  // namespace

std::vector<double> qp_oracle_filter(Angle theta_star, const Vec2& p_i, const Vec2& p_j,
                                     const SafetyParams& params) {
  if (barrier_h(p_i, p_j, params) < 0.0)
    throw std::runtime_error("qp_oracle_filter: h < 0, constraint set check undefined");

  if (margin_g(p_i, p_j, theta_star, params) >= 0.0) return {theta_star.rad()};

  constexpr double kStep = 1e-4;
  bool ok_up = false, ok_down = false;
  const double up = boundary_toward(theta_star.rad(), +kStep, p_i, p_j, params, &ok_up);
  const double down = boundary_toward(theta_star.rad(), -kStep, p_i, p_j, params, &ok_down);
  if (!ok_up && !ok_down) throw std::runtime_error("qp_oracle_filter: infeasible constraint set");

  const auto objective = [&](double th) {
    const double e = normalize_angle(th - theta_star.rad());
    return 0.5 * e * e;
  };

  std::vector<double> out;
  if (ok_up && ok_down) {
    const double fu = objective(up), fd = objective(down);
    if (std::abs(fu - fd) <= 1e-9) {  // symmetric double minimum (tie case)
      out = fu <= fd ? std::vector<double>{normalize_angle(up), normalize_angle(down)}
                     : std::vector<double>{normalize_angle(down), normalize_angle(up)};
    } else {
      out = {normalize_angle(fu < fd ? up : down)};
    }
  } else {
    out = {normalize_angle(ok_up ? up : down)};
  }
  return out;
}

}  // namespace encsim
