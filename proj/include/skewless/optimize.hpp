#pragma once

#include <vector>

#include "skewless/noise.hpp"

namespace skewless {

struct OptimizeOptions {
  double rho_star = 0.999;
  int max_iter = 200;
  bool free_tau = false;    // finite-difference partial
  bool free_alpha = false;  // finite-difference partials per edge
  double rel_tolerance = 1e-10;  // stop when the projected gradient falls below this times f
};

struct OptimizeIterate {
  int iter = 0;
  double f = 0.0;
  double rho = 0.0;
  ProtocolParams params;
};

struct OptimizeResult {
  ProtocolParams params;
  TopologySpec topology;  // differs from the input only with free_alpha
  double f = 0.0;
  double rho = 0.0;
  double kappa_scale = 1.0;  // pre-phase scaling applied to (kappa1, kappa2)
  std::vector<OptimizeIterate> log;
};

/// Projected quasi-Newton descent with backtracking on the H2 norm subject to
/// rho(Ahat) <= rho_star and parameter conditions (i)-(ii). Every logged
/// iterate is feasible and f never increases along the log.
/// Throws std::invalid_argument when init violates (i)-(ii) and
/// std::runtime_error when no stable starting point is found.
OptimizeResult optimize_params(const TopologySpec& topo, const ProtocolParams& init,
                               const OptimizeOptions& options = {});

}  // namespace skewless
