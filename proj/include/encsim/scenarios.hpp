#pragma once

#include "encsim/simulation.hpp"

namespace encsim::scenarios {

/// Exactly mirrored head-on pair; per-step heading noise decides the swap
/// orientation run by run.
Scenario symmetric_head_on(std::uint64_t seed = 1);

/// Shallow asymmetric crossing that drives both safety filters into a long
/// parallel stand-off when opinions are disabled. The second airplane reaches
/// the crossing region first, so with opinions enabled it keeps its track and
/// the first one yields.
Scenario case_study(std::uint64_t seed = 1);

/// case_study with a side preference on airplane 1.
Scenario case_study_biased(double bias1, std::uint64_t seed = 1);

/// n airplanes on a staggered ring, each tasked with swapping position with
/// its antipodal partner; encounters happen pairwise and sequentially.
Scenario ring_exchange(int n = 8, std::uint64_t seed = 1);

}  // namespace encsim::scenarios
