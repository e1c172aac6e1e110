#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace encsim {

using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [-pi, pi) using the mathematical (non-negative) modulo,
/// so negative inputs normalize the same way as positive ones.
inline double normalize_angle(double a) {
  if (!std::isfinite(a)) throw std::domain_error("normalize_angle: non-finite input");
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;  // guard against round-up at the seam
  return r - kPi;
}

/// A heading/bearing angle stored normalized to [-pi, pi).
/// All arithmetic re-normalizes, so the invariant holds after every operation.
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(normalize_angle(radians)) {}

  double rad() const { return value_; }

  // Zero offsets are exact no-ops; re-normalizing can move the value an ulp.
  Angle operator+(double offset) const { return offset == 0.0 ? *this : Angle(value_ + offset); }
  Angle operator-(double offset) const { return offset == 0.0 ? *this : Angle(value_ - offset); }

  /// Signed angular difference, normalized to [-pi, pi).
  friend double operator-(Angle a, Angle b) { return normalize_angle(a.value_ - b.value_); }

  friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

inline Vec2 unit_vector(Angle a) { return Vec2(std::cos(a.rad()), std::sin(a.rad())); }

/// Scalar 2-D cross product a.x*b.y - a.y*b.x.
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// World-frame direction from p_i to p_j. Throws on coincident points.
inline Angle bearing(const Vec2& p_i, const Vec2& p_j) {
  const Vec2 d = p_j - p_i;
  if (d.squaredNorm() == 0.0) throw std::invalid_argument("bearing: coincident points");
  return Angle(std::atan2(d.y(), d.x()));
}

/// Rate of change of the bearing from i to j given both velocities, in rad/s.
/// Symmetric under exchanging the roles of i and j.
inline double bearing_rate(const Vec2& p_i, const Vec2& p_j, const Vec2& v_i, const Vec2& v_j) {
  const Vec2 dp = p_j - p_i;
  const double d2 = dp.squaredNorm();
  if (d2 == 0.0) throw std::invalid_argument("bearing_rate: coincident points");
  return cross2(dp, v_j - v_i) / d2;
}

}  // namespace encsim
