#include "encsim/scenarios.hpp"

namespace encsim::scenarios {

namespace {

AirplaneSpec plane(int id, Vec2 start, Vec2 goal, double bias = 0.0) {
  return {id, start, bearing(start, goal), goal, bias};
}

}  // namespace

Scenario symmetric_head_on(std::uint64_t seed) {
  Scenario sc;
  sc.airplanes = {plane(1, {0.0, 0.0}, {10.0, 0.0}), plane(2, {10.0, 0.0}, {0.0, 0.0})};
  sc.seed = seed;
  return sc;
}

Scenario case_study(std::uint64_t seed) {
  // Shallow mirrored crossing: airplane 1 aims 0.46 rad above the line of
  // sight on a 16-unit leg, airplane 2 aims 0.51 rad below its own on a
  // 13.6-unit leg. Without opinions the filters hold both in a parallel
  // climb for over five time units; with opinions airplane 2 (nearer its
  // goal line) keeps its track and airplane 1 takes the detour.
  Scenario sc;
  const Vec2 p1(0.0, 0.0), p2(10.0, 0.0);
  const Angle h1(0.46);
  const Angle h2 = Angle(-kPi) + (-0.51);
  sc.airplanes = {{1, p1, h1, p1 + 16.0 * unit_vector(h1), 0.0},
                  {2, p2, h2, p2 + 13.6 * unit_vector(h2), 0.0}};
  sc.seed = seed;
  sc.noise_std = 0.0;
  return sc;
}

Scenario case_study_biased(double bias1, std::uint64_t seed) {
  Scenario sc = case_study(seed);
  sc.airplanes[0].bias = bias1;
  sc.noise_std = 0.1;
  return sc;
}

Scenario ring_exchange(int n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("ring_exchange: n must be even, >= 2");
  Scenario sc;
  sc.seed = seed;
  const int pairs = n / 2;
  for (int p = 0; p < pairs; ++p) {
    // Pair radii staggered so the head-on swaps clear the shared crossing
    // region one after another.
    const double radius = 6.0 + 3.0 * p;
    const double phi = kPi * p / pairs;
    const Vec2 a = radius * Vec2(std::cos(phi), std::sin(phi));
    const Vec2 b = -a;
    sc.airplanes.push_back(plane(2 * p + 1, a, b));
    sc.airplanes.push_back(plane(2 * p + 2, b, a));
  }
  return sc;
}

}  // namespace encsim::scenarios
