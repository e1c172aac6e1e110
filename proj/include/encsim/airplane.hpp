#pragma once

#include "encsim/geometry.hpp"

namespace encsim {

/// Flight mode of a single airplane at one instant.
///   Cruising:  safety filter inactive.
///   Avoiding:  filter active, relative bearing rotating.
///   Blocking:  filter active, relative bearing (numerically) constant.
enum class ModeLabel { Cruising, Avoiding, Blocking };

const char* to_token(ModeLabel m);

/// How commanded headings are actuated.
/// Direct sets the heading instantaneously; Tracked relaxes it with a
/// first-order high-gain law (feedforward omitted, the filter output is
/// piecewise and has no derivative at branch switches).
struct HeadingMode {
  enum class Kind { Direct, Tracked };
  Kind kind = Kind::Direct;
  double gain = 50.0;  // only used by Tracked

  static HeadingMode direct() { return {}; }
  static HeadingMode tracked(double k) { return {Kind::Tracked, k}; }
};

struct AirplaneState {
  int id = 0;
  Vec2 position = Vec2::Zero();
  Angle heading;
  Vec2 goal = Vec2::Zero();
  Angle desired_heading;  // where the goal pulls
  Angle nominal_heading;  // desired heading after the opinion adjustment
  Angle safe_heading;     // nominal heading after the safety filter
  double opinion = 0.0;   // z, sign encodes the bypass side
  double attention = 0.0; // u >= 0
  ModeLabel mode = ModeLabel::Cruising;
};

/// One explicit Euler step at constant speed v. The step length is exactly
/// v*dt along the post-update heading in both actuation modes.
AirplaneState integrate_position(const AirplaneState& state, Angle commanded_heading, double dt,
                                 double v, const HeadingMode& mode = HeadingMode::direct());

}  // namespace encsim
