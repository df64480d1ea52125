#include "drcournot/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drcournot {

void Scenario::validate() const {
  if (periods.empty()) throw std::invalid_argument("horizon must be at least 1");
  for (std::size_t t = 0; t < periods.size(); ++t) {
    try {
      periods[t].validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("period " + std::to_string(t + 1) + ": " + e.what());
    }
  }
  sigmoid.validate();
  thermal.validate();
  hydro.validate();
  if (d_net && !(std::isfinite(*d_net) && *d_net > 0.0))
    throw std::invalid_argument("d_net must be positive");
}

Scenario Scenario::with_mode(MarketMode m) const {
  Scenario out = *this;
  out.mode = m;
  return out;
}

bool Scenario::operator==(const Scenario& o) const {
  return periods == o.periods && sigmoid == o.sigmoid && thermal == o.thermal &&
         hydro == o.hydro && mode == o.mode && d_net == o.d_net &&
         multiplier_mode == o.multiplier_mode;
}

std::vector<std::size_t> dr_active_periods(const Scenario& s) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < s.periods.size(); ++t)
    if (s.periods[t].p2 > 0.0) out.push_back(t);
  return out;
}

}  // namespace drcournot
