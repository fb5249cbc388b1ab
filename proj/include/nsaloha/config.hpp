#pragma once

#include <map>
#include <string>

#include "nsaloha/simulator.hpp"

namespace nsaloha {

// Flat `key = value` configuration (text, `#` comments). Recognized keys:
//   lambda, r, T, beta, A, mu, noise_w, B,
//   mac.kind (slotted|renewal|rain), mac.p, mac.epsilonB, mac.lambda_s,
//   pathloss.kind (powerlaw|clamped|shifted|mindist), pathloss.u0,
//   window, boundary (torus|none|guard), guard_margin,
//   replications, seed, constraint (mean|max), threads
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);
std::string serialize_config(const ConfigMap& map);

/// The default scenario: lambda = 0.001, r = sqrt(1000), T = 10, beta = 4,
/// B = 1, no noise, slotted MAC with p = 0.05, torus window of 1000 m.
SimConfig default_scenario();

/// Applies a flat config on top of a base scenario. Unknown keys are
/// rejected (ConfigError) before anything runs.
SimConfig scenario_from_config(const ConfigMap& map, SimConfig base = default_scenario());

/// Round-trips a scenario back to the flat format.
ConfigMap config_from_scenario(const SimConfig& cfg);

}  // namespace nsaloha
