#pragma once

#include "encsim/geometry.hpp"

namespace encsim {

struct OpinionParams {
  double d = 3.0;      // opinion damping
  double a_self = 1.0; // weight of the own opinion inside the saturation
  double gamma = 4.0;  // coupling weight on the other airplane's opinion
  double bias = 0.0;   // prior side preference, positive favors right bypass
  double k1 = 2.0;     // attention numerator gain
  double k2 = 0.1;     // attention bearing-rate softening
  // Opinion-to-heading saturation gain. Kept small enough that the heading
  // map stays linear over one attention-driven Euler kick (u*dt ~ 0.2);
  // steeper gains turn the estimator loop into a sign relay that can hold
  // two close airplanes in anti-phase chatter. Committed opinions reach
  // |z| ~ u/d >> 1 and still saturate tanh(k_z z) fully.
  double k_z = 2.0;

  void validate() const;

  /// Checks k1/k2 > d/(2*kappa) for kappa in {a_self, gamma, (a_self+gamma)/2},
  /// so the attention ceiling clears every candidate bifurcation point.
  void validate_gain_condition() const;
};

struct OpinionState {
  double z = 0.0;           // own opinion
  double z_other_est = 0.0; // estimate of the other airplane's opinion
  double u = 0.0;           // current attention, >= 0
};

/// Attention gain: k1 * 1(g_at_desired < 0) / (|beta_dot| + k2).
/// The indicator is evaluated at the raw desired heading, not the filtered one.
double attention(double g_at_desired, double beta_dot, const OpinionParams& params);

/// One explicit Euler step of
///   z' = -d z + u tanh(a_self z + gamma z_other_est + bias).
/// Only z advances; the estimate and attention are exogenous inputs.
OpinionState opinion_step(const OpinionState& state, const OpinionParams& params, double dt);

/// Opinion-guided nominal heading
///   theta* + |tanh(k_z z)| angle(beta - theta*) + tanh(k_z z) pi/2.
/// Equals theta* at z = 0 and saturates to beta +- pi/2 for committed z.
Angle guided_heading(Angle theta_star, Angle beta, double z, double k_z);

/// Communication-free intent estimate: the other airplane's heading deviation
/// off the line of sight back to us, normalized to [-pi, pi).
double estimate_intention(Angle theta_other, const Vec2& p_other, const Vec2& p_self);

/// Critical attention u* = d / (2 kappa) at which the neutral opinion destabilizes.
double critical_attention(double d, double kappa);

}  // namespace encsim
