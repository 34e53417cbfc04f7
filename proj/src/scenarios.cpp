#include "skewless/scenarios.hpp"

#include <stdexcept>
#include <vector>

namespace skewless {

ProtocolParams default_params(double tau) { return ProtocolParams{1.1, 1.0, 0.99, tau}; }

void apply_commit_weights(TopologySpec& topo, double c) {
  std::vector<int> degree(topo.n, 0);
  for (const Edge& e : topo.edges) ++degree[e.from];
  for (Edge& e : topo.edges) e.weight = c / degree[e.from];
}

TopologySpec client_server(double c) {
  TopologySpec t;
  t.n = 2;
  t.edges = {{1, 0, c, 1.0}};
  return t;
}

TopologySpec leader_loop(double c) {
  TopologySpec t;
  t.n = 3;
  t.edges = {{1, 0, 1.0, 1.0}, {2, 0, 1.0, 1.0}, {1, 2, 1.0, 1.0}, {2, 1, 1.0, 1.0}};
  apply_commit_weights(t, c);
  return t;
}

TopologySpec wheel_topology(int n, int k, double c) {
  if (n < 3) throw std::invalid_argument("wheel_topology: n must be >= 3");
  if (k < 0 || 2 * k > n - 2) throw std::invalid_argument("wheel_topology: K out of range");
  const int clients = n - 1;
  TopologySpec t;
  t.n = n;
  for (int i = 0; i < clients; ++i) {
    const int node = i + 1;
    t.edges.push_back({node, 0, 1.0, 1.0});
    for (int d = 1; d <= k; ++d) {
      t.edges.push_back({node, 1 + (i + d) % clients, 1.0, 1.0});
      t.edges.push_back({node, 1 + (i - d + clients) % clients, 1.0, 1.0});
    }
  }
  apply_commit_weights(t, c);
  return t;
}

TopologySpec multi_hop_topology(double c) {
  TopologySpec t;
  t.n = 7;
  t.edges = {{1, 0, 1, 1}, {2, 0, 1, 1}, {1, 2, 1, 1}, {2, 1, 1, 1},
             {3, 1, 1, 1}, {4, 2, 1, 1}, {5, 3, 1, 1}, {6, 4, 1, 1}};
  apply_commit_weights(t, c);
  return t;
}

Scenario experiment1_scenario(long extra_steps) {
  Scenario sc;
  sc.topo.n = 3;
  sc.topo.edges = {{1, 0, 0.7, 1.0}};
  sc.topo.skew = Eigen::Vector3d(1.0, 1.0 + 20e-6, 1.0 - 30e-6);
  sc.params = default_params(1.0);
  sc.steps = 60 + extra_steps;
  sc.reference = 0;
  SystemState z = SystemState::zeros(3);
  z.x << 0.0, 1e-3, -2e-3;
  z.s.setOnes();
  sc.initial = z;
  TopologySpec loop = leader_loop(0.7);
  loop.skew = sc.topo.skew;
  sc.events.push_back(Event::replace_topology(60, loop));
  return sc;
}

Scenario experiment2_scenario(int k, long steps, std::uint64_t seed, double jitter_max, double grid) {
  Scenario sc;
  sc.topo = wheel_topology(10, k, 0.7);
  sc.params = default_params(0.5);
  sc.steps = steps;
  sc.reference = 0;
  sc.noise.seed = seed;
  for (const Edge& e : sc.topo.edges) {
    if (e.to == 0) sc.noise.edge_jitter[{e.from, e.to}] = JitterModel::uniform_grid(jitter_max, grid);
  }
  return sc;
}

Scenario experiment5_scenario() {
  Scenario sc;
  sc.topo = leader_loop(0.7);
  sc.params = default_params(0.5);
  sc.steps = 16000;
  sc.reference = 0;
  sc.noise.edge_jitter[{1, 2}] = JitterModel::constant(-10e-6);
  sc.events.push_back(Event::disable_node(2000, 0));
  sc.events.push_back(Event::enable_node(13200, 0));
  sc.fit_window = std::make_pair(2000L, 13200L);
  sc.warmup = 0.1;
  return sc;
}

TopologySpec experiment6_topology(const std::string& preset) {
  TopologySpec t = multi_hop_topology(0.7);
  double wander = 0.0;
  double leader_jitter = 1.0;
  if (preset == "jitter") {
    wander = 1e-3;
    leader_jitter = 100.0;
  } else if (preset == "wander") {
    wander = 1e-1;
  } else if (preset == "both") {
    wander = 1e-1;
    leader_jitter = 100.0;
  } else {
    throw std::invalid_argument("unknown gain preset '" + preset + "' (jitter|wander|both)");
  }
  t.wander_gain = VectorXd::Constant(t.n, wander);
  for (Edge& e : t.edges) e.noise_gain = e.to == 0 ? leader_jitter : 1.0;
  return t;
}

}  // namespace skewless
