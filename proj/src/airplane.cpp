#include "encsim/airplane.hpp"

namespace encsim {

const char* to_token(ModeLabel m) {
  switch (m) {
    case ModeLabel::Cruising: return "cruising";
    case ModeLabel::Avoiding: return "avoiding";
    case ModeLabel::Blocking: return "blocking";
  }
  return "?";
}

AirplaneState integrate_position(const AirplaneState& state, Angle commanded_heading, double dt,
                                 double v, const HeadingMode& mode) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_position: dt must be positive");
  AirplaneState next = state;
  if (mode.kind == HeadingMode::Kind::Direct) {
    next.heading = commanded_heading;
  } else {
    const double rate = -mode.gain * (state.heading - commanded_heading);
    next.heading = state.heading + rate * dt;
  }
  next.position = state.position + v * dt * unit_vector(next.heading);
  return next;
}

}  // namespace encsim
