#pragma once

#include <string>

#include "skewless/optimize.hpp"
#include "skewless/sim.hpp"

namespace skewless {

/// Default gains used throughout the experiments: p = 0.99, k1 = 1.1, k2 = 1.0.
ProtocolParams default_params(double tau);

/// alpha_ij = c / |N_i| for every edge, in place.
void apply_commit_weights(TopologySpec& topo, double c);

/// Node 2 polls node 1 (leader).
TopologySpec client_server(double c = 0.7);

/// Nodes 2 and 3 poll the leader and each other.
TopologySpec leader_loop(double c = 0.7);

/// Leader plus n-1 clients on a ring; each client polls the leader and its K
/// nearest ring neighbours on each side. Requires n >= 3 and
/// 0 <= K <= (n-2)/2; throws std::invalid_argument otherwise.
TopologySpec wheel_topology(int n, int k, double c = 0.7);

/// Seven nodes: 2,3 poll the leader and each other, 4->2, 5->3, 6->4, 7->5.
TopologySpec multi_hop_topology(double c = 0.7);

/// Two-node client-server at tau = 1 s for 60 steps, then a third node joins
/// into the leader loop. The loop is unstable at this tau, so the offsets
/// grow once the third node joins.
Scenario experiment1_scenario(long extra_steps = 120);

/// Wheel with uniform ping-pong jitter on the leader links.
Scenario experiment2_scenario(int k, long steps = 20000, std::uint64_t seed = 1,
                              double jitter_max = 10e-3, double grid = 1e-3);

/// Leader loop at tau = 0.5 s with a constant bias on one client link; the
/// leader is switched off and back on.
Scenario experiment5_scenario();

/// Gain presets "jitter", "wander" and "both" on the multi-hop topology.
TopologySpec experiment6_topology(const std::string& preset);

}  // namespace skewless
