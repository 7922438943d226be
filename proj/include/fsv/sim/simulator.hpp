#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsv/data/config.hpp"
#include "fsv/data/draws.hpp"
#include "fsv/data/panel.hpp"

namespace fsv::sim {

// Ground-truth parameter set for synthetic panels.
struct TrueParams {
  ParameterDraw params;
  long t_len = 0;
  std::uint64_t seed = 1;
  ArSign ar_sign = ArSign::plus;
  std::vector<std::string> series_names;  // optional; generated if empty
};

struct SimulatedPanel {
  ReturnPanel returns;   // demeaned = false; mean approximately zero
  LatentPaths latents;   // true h ((T+1) x (m+r)) and f (r x T)
  TrueParams truth;
};

// Draws h recursively from the stationary initial law, factor scores from
// N(0, V_t), and returns y_t = Lambda f_t + eps_t. Deterministic given seed.
SimulatedPanel simulate_panel(const TrueParams& truth);

// Price panel reconstructed by cumulating returns from a base price of 100,
// with synthetic bi-weekly ISO dates. One more row than the return panel.
PricePanel to_price_panel(const ReturnPanel& returns);

// Named fixtures with documented parameter values:
//   tiny        m=3,  r=1, T=200   (fast smoke runs)
//   paper-shape m=12, r=4, T=425   (dimensions of a bi-weekly 12-series panel)
//   recovery    m=6,  r=2, T=1000  (parameter-recovery studies)
TrueParams fixture(const std::string& name, std::uint64_t seed_override = 0);
std::vector<std::string> fixture_names();

}  // namespace fsv::sim
