#include <doctest.h>

#include <random>

#include "encsim/opinion.hpp"

using namespace encsim;

namespace {

OpinionParams experiment_params() {
  OpinionParams p;  // defaults are the experiment set: d=3, a=1, gamma=4, k1=2, k2=0.1
  return p;
}

}  // namespace

TEST_CASE("attention values") {
  const auto p = experiment_params();
  CHECK(attention(0.5, 1.0, p) == 0.0);
  CHECK(attention(0.0, 0.0, p) == 0.0);  // indicator is strict
  CHECK(attention(-0.1, 0.0, p) == doctest::Approx(20.0));
  CHECK(attention(-0.1, 0.1, p) == doctest::Approx(10.0));
  CHECK(attention(-0.1, -0.1, p) == doctest::Approx(10.0));
}

TEST_CASE("opinion_step Euler updates") {
  const auto p = experiment_params();

  OpinionState neutral{0.0, 0.0, 5.0};
  CHECK(opinion_step(neutral, p, 0.01).z == 0.0);  // unbiased origin is an equilibrium

  OpinionState decaying{1.0, 0.0, 0.0};
  CHECK(opinion_step(decaying, p, 0.01).z == doctest::Approx(0.97));

  OpinionState pulled{0.0, 0.1, 20.0};
  CHECK(opinion_step(pulled, p, 0.01).z == doctest::Approx(0.2 * std::tanh(0.4)));

  CHECK_THROWS_AS(opinion_step(neutral, p, 0.0), std::invalid_argument);
}

TEST_CASE("opinion decays monotonically without attention") {
  const auto p = experiment_params();
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> z0(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    OpinionState s{z0(gen), 0.0, 0.0};
    double prev = std::abs(s.z);
    for (int k = 0; k < 200; ++k) {
      s = opinion_step(s, p, 0.01);  // d*dt = 0.03 < 1
      CHECK(std::abs(s.z) <= prev);
      prev = std::abs(s.z);
    }
  }
}

TEST_CASE("converged opinions respect the saturation bound u/d") {
  const auto p = experiment_params();
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> z0(-3.0, 3.0);
  std::uniform_real_distribution<double> u_dist(0.0, 25.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double u = u_dist(gen);
    OpinionState a{z0(gen), 0.0, u};
    OpinionState b{z0(gen), 0.0, u};
    for (int k = 0; k < 4000; ++k) {
      const double za = a.z, zb = b.z;
      a.z_other_est = zb;
      b.z_other_est = za;
      a = opinion_step(a, p, 0.01);
      b = opinion_step(b, p, 0.01);
    }
    CHECK(std::abs(a.z) <= u / p.d + 1e-6);
    CHECK(std::abs(b.z) <= u / p.d + 1e-6);
  }
}

TEST_CASE("guided_heading endpoints") {
  const Angle theta_star(0.4), beta(-1.1);
  CHECK(guided_heading(theta_star, beta, 0.0, 10.0).rad() == doctest::Approx(0.4));
  // tanh(10) is 1 to well below the tolerance used here
  CHECK(guided_heading(theta_star, beta, 1.0, 10.0).rad() ==
        doctest::Approx(normalize_angle(beta.rad() + kPi / 2.0)).epsilon(1e-7));
  CHECK(guided_heading(theta_star, beta, -1.0, 10.0).rad() ==
        doctest::Approx(normalize_angle(beta.rad() - kPi / 2.0)).epsilon(1e-7));
}

TEST_CASE("guided_heading is continuous across z = 0") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Angle theta_star(angle(gen)), beta(angle(gen));
    const double eps = 1e-8;
    const double above = guided_heading(theta_star, beta, eps, 10.0).rad();
    const double below = guided_heading(theta_star, beta, -eps, 10.0).rad();
    CHECK(std::abs(normalize_angle(above - below)) < 1e-6);
  }
}

TEST_CASE("estimate_intention reads the heading deviation off the line of sight") {
  const Vec2 p_self(0, 0), p_other(5, 0);
  const Angle los = bearing(p_other, p_self);  // -pi
  CHECK(estimate_intention(los, p_other, p_self) == doctest::Approx(0.0));
  CHECK(estimate_intention(los + 0.1, p_other, p_self) == doctest::Approx(0.1));
  CHECK(estimate_intention(los - kPi / 2.0, p_other, p_self) == doctest::Approx(-kPi / 2.0));
  CHECK_THROWS_AS(estimate_intention(Angle(0.0), p_self, p_self), std::invalid_argument);
}

TEST_CASE("critical_attention") {
  CHECK(critical_attention(1.0, 1.0) == doctest::Approx(0.5));
  CHECK(critical_attention(4.0, 2.0) == doctest::Approx(1.0));
  CHECK(critical_attention(3.0, 1.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(critical_attention(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(critical_attention(1.0, -1.0), std::domain_error);
}

TEST_CASE("experiment gains clear every candidate bifurcation point") {
  const auto p = experiment_params();
  CHECK_NOTHROW(p.validate_gain_condition());
  const double ceiling = p.k1 / p.k2;
  for (double kappa : {p.a_self, p.gamma, 0.5 * (p.a_self + p.gamma)})
    CHECK(ceiling > critical_attention(p.d, kappa));

  OpinionParams weak = p;
  weak.k1 = 0.01;  // ceiling 0.1 < d/(2*gamma) = 0.375
  CHECK_THROWS_AS(weak.validate_gain_condition(), std::invalid_argument);
}

TEST_CASE("unbiased two-opinion trajectories mirror under sign flip") {
  auto p = experiment_params();
  p.bias = 0.0;
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> z0(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    OpinionState a{z0(gen), 0.0, 1.2}, b{z0(gen), 0.0, 1.2};
    OpinionState ma{-a.z, 0.0, 1.2}, mb{-b.z, 0.0, 1.2};
    for (int k = 0; k < 500; ++k) {
      a.z_other_est = b.z;
      b.z_other_est = a.z;
      ma.z_other_est = mb.z;
      mb.z_other_est = ma.z;
      a = opinion_step(a, p, 0.01);
      b = opinion_step(b, p, 0.01);
      ma = opinion_step(ma, p, 0.01);
      mb = opinion_step(mb, p, 0.01);
      CHECK(ma.z == doctest::Approx(-a.z).epsilon(1e-12));
      CHECK(mb.z == doctest::Approx(-b.z).epsilon(1e-12));
    }
  }
}
