#pragma once

#include <string>

#include "encsim/simulation.hpp"

namespace encsim {

struct OutputOptions {
  std::string out_dir = "out";
  bool emit_csv = true;
  bool emit_svg = true;
};

struct RunSpec {
  Scenario scenario;
  OutputOptions output;
};

/// Parses and validates the JSON run-spec document. Unknown keys are
/// rejected; omitted fields take the documented defaults; the resulting
/// scenario is fully validated. Errors carry the offending key.
RunSpec parse_run_spec(const std::string& text);

/// Canonical full-form JSON for a spec; parse(serialize(x)) == x.
std::string serialize_run_spec(const RunSpec& spec);

/// Human-readable schema with field meanings and defaults.
std::string run_spec_schema();

}  // namespace encsim
