#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "drcournot/scenario.hpp"

namespace drcournot {

/// Malformed or invalid scenario file. The message carries the source name and,
/// where known, the line and key.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario files are YAML mappings:
//
//   horizon: 24
//   alpha: 0.1            # 1/MWh
//   xi: 1000              # MWh
//   gamma: [...]          # $/MWh^2, horizon entries
//   intercept: [...]      # $/MWh, horizon entries
//   p2: [...]             # $/MWh, horizon entries
//   thermal: {c1: 10, c2: 0.025, c3: 0, r_max: 500}
//   hydro: {c4: 0, w_max: 1000, production: identity}   # or a positive efficiency
//   mode: dr              # no_dr | dr
//   d_net: 22940.2        # optional, MWh
//   multiplier_mode: shared   # optional, shared | per_player
//
// Unknown keys anywhere are rejected.

Scenario parse_scenario(std::string_view text, const std::string& source = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& s);

MarketMode parse_market_mode(std::string_view text);
std::string to_string(MarketMode m);
MultiplierMode parse_multiplier_mode(std::string_view text);
std::string to_string(MultiplierMode m);

}  // namespace drcournot
