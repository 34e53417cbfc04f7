#pragma once

#include <ostream>
#include <string>

#include "skewless/config.hpp"

namespace skewless {

enum ExitCode : int { kExitStable = 0, kExitError = 1, kExitUnstable = 2, kExitMarginal = 3 };

/// Prints the verdict report; the first line reads "<verdict>, tauMax=<t>s".
int cmd_analyze(const Scenario& sc, std::ostream& out);

/// Runs the scenario and writes trace.csv and metrics.csv into out_dir.
/// Returns 2 when the run diverged.
int cmd_simulate(const Scenario& sc, const std::string& out_dir, std::ostream& out);

/// Writes opt_log.csv and opt_params.csv into out_dir. Infeasible start -> 2.
int cmd_optimize(const TopologySpec& topo, const ProtocolParams& init,
                 const OptimizeOptions& options, const std::string& out_dir, std::ostream& out);

/// Named scenarios: exp1, exp1a (client-server, tau 1), exp1b (loop, tau 1),
/// exp1c (loop, tau 0.5), exp2 (wheel K=0), exp5. Throws std::invalid_argument.
Scenario preset_scenario(const std::string& name, int wheel_k = 0);

}  // namespace skewless
