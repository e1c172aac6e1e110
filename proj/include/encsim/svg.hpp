#pragma once

#include <string>

#include "encsim/analysis.hpp"
#include "encsim/simulation.hpp"

namespace encsim::svg {

/// Flight paths per airplane; circles mark starts, squares mark goals.
std::string trajectories(const TrajectoryLog& log, const Scenario& scenario);

/// Opinion traces z(t) per airplane.
std::string opinions(const TrajectoryLog& log);

/// Minimum pairwise separation over time with the safe margin drawn dashed.
std::string separation(const TrajectoryLog& log, double r);

/// Equilibrium branches over attention; stable branches solid, unstable open.
std::string bifurcation(const BifurcationSweep& sweep);

}  // namespace encsim::svg
