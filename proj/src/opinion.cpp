#include "encsim/opinion.hpp"

#include <cmath>

namespace encsim {

void OpinionParams::validate() const {
  if (!(d > 0.0)) throw std::invalid_argument("OpinionParams: d must be positive");
  if (!(a_self > 0.0)) throw std::invalid_argument("OpinionParams: a_self must be positive");
  if (!(k1 > 0.0)) throw std::invalid_argument("OpinionParams: k1 must be positive");
  if (!(k2 > 0.0)) throw std::invalid_argument("OpinionParams: k2 must be positive");
  if (!(k_z > 0.0)) throw std::invalid_argument("OpinionParams: k_z must be positive");
}

void OpinionParams::validate_gain_condition() const {
  validate();
  const double ceiling = k1 / k2;
  const double kappas[] = {a_self, gamma, 0.5 * (a_self + gamma)};
  for (double kappa : kappas) {
    if (kappa <= 0.0) continue;
    if (ceiling <= critical_attention(d, kappa))
      throw std::invalid_argument(
          "OpinionParams: k1/k2 must exceed d/(2*kappa) or opinions cannot commit");
  }
}

double attention(double g_at_desired, double beta_dot, const OpinionParams& params) {
  if (g_at_desired >= 0.0) return 0.0;
  return params.k1 / (std::abs(beta_dot) + params.k2);
}

OpinionState opinion_step(const OpinionState& state, const OpinionParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("opinion_step: dt must be positive");
  const double drive =
      std::tanh(params.a_self * state.z + params.gamma * state.z_other_est + params.bias);
  OpinionState next = state;
  next.z = state.z + dt * (-params.d * state.z + state.u * drive);
  return next;
}

Angle guided_heading(Angle theta_star, Angle beta, double z, double k_z) {
  const double t = std::tanh(k_z * z);
  return theta_star + (std::abs(t) * (beta - theta_star) + t * (kPi / 2.0));
}

double estimate_intention(Angle theta_other, const Vec2& p_other, const Vec2& p_self) {
  return theta_other - bearing(p_other, p_self);
}

double critical_attention(double d, double kappa) {
  if (!(d > 0.0) || !(kappa > 0.0))
    throw std::domain_error("critical_attention: d and kappa must be positive");
  return d / (2.0 * kappa);
}

}  // namespace encsim
