#pragma once

#include <vector>

#include "encsim/geometry.hpp"

namespace encsim {

struct SafetyParams {
  double r = 1.0;            // safe margin between airplanes
  double v = 1.0;            // common constant speed
  double alpha_cbf = 1.0;    // linear class-K gain of the barrier condition
  double g_tolerance = 1e-9; // slack for feasibility checks

  void validate() const;
};

enum class FilterBranch { Otherwise, PlusDelta, MinusDelta, TieBreak };

const char* to_token(FilterBranch b);

struct FilterResult {
  Angle safe_heading;
  bool active = false;      // true iff the output differs from the input heading
  FilterBranch branch = FilterBranch::Otherwise;
  bool infeasible = false;  // set when already inside the safe margin (h < 0)
};

/// Barrier value ||p1-p2||^2 - r^2; nonnegative outside the margin.
double barrier_h(const Vec2& p1, const Vec2& p2, const SafetyParams& params);

/// Decentralized barrier margin for one airplane heading theta:
/// (alpha/2)*h + 2v*(p_i-p_j)^T [cos theta; sin theta]. Safe headings have g >= 0.
double margin_g(const Vec2& p_i, const Vec2& p_j, Angle theta, const SafetyParams& params);

/// Half-width of the unsafe heading cone around the bearing, in [0, pi/2].
/// Zero when far apart, pi/2 at contact with the margin.
double half_width_delta(const Vec2& p_i, const Vec2& p_j, const SafetyParams& params);

/// Closed-form minimal-interference projection of theta_star onto the safe
/// heading set. tie_hint (+1/-1) picks the side when theta_star points exactly
/// along the bearing. When h < 0 the result is the pure-evasion heading
/// bearing + tie_hint*pi/2 with the infeasible flag set.
FilterResult safety_filter(Angle theta_star, const Vec2& p_i, const Vec2& p_j,
                           const SafetyParams& params, int tie_hint = +1);

/// Brute-force reference for the filter: dense grid search over [-pi, pi) at
/// 1e-4 rad resolution plus bisection refinement of the constraint boundary,
/// minimizing the squared normalized deviation from theta_star subject to
/// margin_g >= 0. Returns every global minimizer (two in the symmetric tie
/// case), best first. Test fixture only; requires h >= 0.
std::vector<double> qp_oracle_filter(Angle theta_star, const Vec2& p_i, const Vec2& p_j,
                                     const SafetyParams& params);

}  // namespace encsim
