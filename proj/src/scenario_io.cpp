#include "encsim/scenario_io.hpp"

#include <initializer_list>

#include <json.hpp>

namespace encsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("run spec: " + msg); }

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("'" + ctx + "' must be an object");
}

void reject_unknown(const json& obj, const std::string& ctx,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) fail("unknown key '" + item.key() + "' in '" + ctx + "'");
  }
}

double get_number(const json& obj, const std::string& ctx, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail("'" + ctx + "." + key + "' must be a number");
  return obj[key].get<double>();
}

bool get_bool(const json& obj, const std::string& ctx, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) fail("'" + ctx + "." + key + "' must be a boolean");
  return obj[key].get<bool>();
}

Vec2 get_vec2(const json& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key)) fail("missing '" + ctx + "." + key + "'");
  const json& v = obj[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail("'" + ctx + "." + key + "' must be [x, y]");
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

}  // namespace

namespace {
RunSpec parse_run_spec_impl(const json& root);
}

RunSpec parse_run_spec(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_run_spec_impl(root);
  } catch (const json::exception& e) {
    fail(std::string("invalid value: ") + e.what());
  }
}

namespace {
RunSpec parse_run_spec_impl(const json& root) {
  require_object(root, "document");
  reject_unknown(root, "document",
                 {"schema_version", "airplanes", "safety", "opinion", "dt", "t_max",
                  "goal_radius", "noise_std", "seed", "opinion_enabled", "heading_mode",
                  "output"});

  if (root.contains("schema_version")) {
    if (!root["schema_version"].is_string() || root["schema_version"] != "1")
      fail("'schema_version' must be the string \"1\"");
  }

  RunSpec spec;
  Scenario& sc = spec.scenario;

  if (!root.contains("airplanes") || !root["airplanes"].is_array())
    fail("'airplanes' must be an array");
  int auto_id = 1;
  for (const json& a : root["airplanes"]) {
    require_object(a, "airplanes[]");
    reject_unknown(a, "airplanes[]", {"id", "start", "goal", "heading0", "bias"});
    AirplaneSpec p;
    p.id = a.contains("id") ? a["id"].get<int>() : auto_id;
    ++auto_id;
    p.start = get_vec2(a, "airplanes[]", "start");
    p.goal = get_vec2(a, "airplanes[]", "goal");
    p.bias = get_number(a, "airplanes[]", "bias", 0.0);
    if (a.contains("heading0")) {
      if (!a["heading0"].is_number()) fail("'airplanes[].heading0' must be a number");
      p.heading0 = Angle(a["heading0"].get<double>());
    } else {
      if ((p.goal - p.start).squaredNorm() == 0.0)
        fail("'airplanes[]': goal coincides with start and no heading0 given");
      p.heading0 = bearing(p.start, p.goal);
    }
    sc.airplanes.push_back(p);
  }

  if (root.contains("safety")) {
    const json& s = root["safety"];
    require_object(s, "safety");
    reject_unknown(s, "safety", {"r", "v", "alpha_cbf", "g_tolerance"});
    sc.safety.r = get_number(s, "safety", "r", sc.safety.r);
    sc.safety.v = get_number(s, "safety", "v", sc.safety.v);
    sc.safety.alpha_cbf = get_number(s, "safety", "alpha_cbf", sc.safety.alpha_cbf);
    sc.safety.g_tolerance = get_number(s, "safety", "g_tolerance", sc.safety.g_tolerance);
  }

  if (root.contains("opinion")) {
    const json& o = root["opinion"];
    require_object(o, "opinion");
    reject_unknown(o, "opinion", {"d", "a_self", "gamma", "k1", "k2", "k_z"});
    sc.opinion.d = get_number(o, "opinion", "d", sc.opinion.d);
    sc.opinion.a_self = get_number(o, "opinion", "a_self", sc.opinion.a_self);
    sc.opinion.gamma = get_number(o, "opinion", "gamma", sc.opinion.gamma);
    sc.opinion.k1 = get_number(o, "opinion", "k1", sc.opinion.k1);
    sc.opinion.k2 = get_number(o, "opinion", "k2", sc.opinion.k2);
    sc.opinion.k_z = get_number(o, "opinion", "k_z", sc.opinion.k_z);
  }

  sc.dt = get_number(root, "document", "dt", sc.dt);
  sc.t_max = get_number(root, "document", "t_max", sc.t_max);
  sc.goal_radius = get_number(root, "document", "goal_radius", sc.goal_radius);
  sc.noise_std = get_number(root, "document", "noise_std", sc.noise_std);
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) fail("'seed' must be a non-negative integer");
    sc.seed = root["seed"].get<std::uint64_t>();
  }
  sc.opinion_enabled = get_bool(root, "document", "opinion_enabled", sc.opinion_enabled);

  if (root.contains("heading_mode")) {
    const json& h = root["heading_mode"];
    if (h.is_string() && h == "direct") {
      sc.heading_mode = HeadingMode::direct();
    } else if (h.is_object()) {
      reject_unknown(h, "heading_mode", {"tracked"});
      if (!h.contains("tracked") || !h["tracked"].is_number())
        fail("'heading_mode' must be \"direct\" or {\"tracked\": gain}");
      sc.heading_mode = HeadingMode::tracked(h["tracked"].get<double>());
    } else {
      fail("'heading_mode' must be \"direct\" or {\"tracked\": gain}");
    }
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    require_object(o, "output");
    reject_unknown(o, "output", {"out_dir", "emit_csv", "emit_svg"});
    if (o.contains("out_dir")) {
      if (!o["out_dir"].is_string()) fail("'output.out_dir' must be a string");
      spec.output.out_dir = o["out_dir"].get<std::string>();
    }
    spec.output.emit_csv = get_bool(o, "output", "emit_csv", spec.output.emit_csv);
    spec.output.emit_svg = get_bool(o, "output", "emit_svg", spec.output.emit_svg);
  }

  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return spec;
}
}  // namespace

std::string serialize_run_spec(const RunSpec& spec) {
  const Scenario& sc = spec.scenario;
  json root;
  root["schema_version"] = "1";
  json planes = json::array();
  for (const auto& a : sc.airplanes) {
    json p;
    p["id"] = a.id;
    p["start"] = {a.start.x(), a.start.y()};
    p["goal"] = {a.goal.x(), a.goal.y()};
    p["heading0"] = a.heading0.rad();
    p["bias"] = a.bias;
    planes.push_back(std::move(p));
  }
  root["airplanes"] = std::move(planes);
  root["safety"] = {{"r", sc.safety.r},
                    {"v", sc.safety.v},
                    {"alpha_cbf", sc.safety.alpha_cbf},
                    {"g_tolerance", sc.safety.g_tolerance}};
  root["opinion"] = {{"d", sc.opinion.d}, {"a_self", sc.opinion.a_self},
                     {"gamma", sc.opinion.gamma}, {"k1", sc.opinion.k1},
                     {"k2", sc.opinion.k2},       {"k_z", sc.opinion.k_z}};
  root["dt"] = sc.dt;
  root["t_max"] = sc.t_max;
  root["goal_radius"] = sc.goal_radius;
  root["noise_std"] = sc.noise_std;
  root["seed"] = sc.seed;
  root["opinion_enabled"] = sc.opinion_enabled;
  if (sc.heading_mode.kind == HeadingMode::Kind::Direct)
    root["heading_mode"] = "direct";
  else
    root["heading_mode"] = {{"tracked", sc.heading_mode.gain}};
  root["output"] = {{"out_dir", spec.output.out_dir},
                    {"emit_csv", spec.output.emit_csv},
                    {"emit_svg", spec.output.emit_svg}};
  return root.dump(2) + "\n";
}

std::string run_spec_schema() {
  return R"({
  "schema_version": "1",                 // optional, must be "1" when present
  "airplanes": [                          // required, at least 2 entries
    {
      "id": 1,                            // optional, defaults to position in list (1-based)
      "start": [0.0, 0.0],                // required, world position
      "goal": [10.0, 0.0],                // required, target position
      "heading0": 0.0,                    // optional, initial heading in radians;
                                          //   defaults to the bearing from start to goal
      "bias": 0.0                         // optional, side preference (positive = right bypass)
    }
  ],
  "safety": {                             // optional section
    "r": 1.0,                             // safe separation margin, > 0
    "v": 1.0,                             // common speed, > 0
    "alpha_cbf": 1.0,                     // barrier gain, > 0
    "g_tolerance": 1e-9                   // feasibility slack, >= 0
  },
  "opinion": {                            // optional section
    "d": 3.0,                             // opinion damping, > 0
    "a_self": 1.0,                        // self weight, > 0
    "gamma": 4.0,                         // coupling weight
    "k1": 2.0,                            // attention numerator gain, > 0
    "k2": 0.1,                            // attention softening, > 0
    "k_z": 10.0                           // opinion-to-heading gain, > 0
  },
  "dt": 0.01,                             // integrator step, > 0
  "t_max": 200.0,                         // simulation horizon, > 0
  "goal_radius": 0.1,                     // arrival radius, > 0
  "noise_std": 0.1,                       // heading noise std in radians, >= 0
                                          //   (variance 0.01 by default)
  "seed": 1,                              // non-negative integer RNG seed
  "opinion_enabled": true,                // false = plain safety filter baseline
  "heading_mode": "direct",               // or {"tracked": 50.0}
  "output": {                             // optional section
    "out_dir": "out",
    "emit_csv": true,
    "emit_svg": true
  }
}
)";
}

}  // namespace encsim
