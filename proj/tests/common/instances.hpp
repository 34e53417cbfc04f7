#pragma once

// Random test instances whose Laplacians have real spectra.

#include <random>

#include "skewless/analysis.hpp"
#include "skewless/scenarios.hpp"

namespace skewless::fixtures {

enum class Family { LeaderTree, Symmetric, SymmetricPlusLeader };

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline VectorXd random_skews(std::mt19937_64& rng, int n, double ppm = 100.0) {
  VectorXd r(n);
  for (int i = 0; i < n; ++i) r(i) = 1.0 + uniform(rng, -ppm, ppm) * 1e-6;
  return r;
}

/// Undirected spanning tree plus a few chords among nodes [first, n).
inline void add_symmetric_block(std::mt19937_64& rng, TopologySpec& t, int first) {
  const int n = t.n;
  auto add_pair = [&](int a, int b) {
    if (t.find_edge(a, b) >= 0) return;
    const double w = uniform(rng, 0.1, 0.6);
    t.edges.push_back({a, b, w, 1.0});
    t.edges.push_back({b, a, w, 1.0});
  };
  for (int i = first + 1; i < n; ++i) add_pair(i, pick(rng, first, i - 1));
  const int chords = n - first > 2 ? pick(rng, 0, n - first - 1) : 0;
  for (int c = 0; c < chords; ++c) {
    const int a = pick(rng, first, n - 1);
    const int b = pick(rng, first, n - 1);
    if (a != b) add_pair(a, b);
  }
}

inline TopologySpec random_topology(std::mt19937_64& rng, Family family, int n) {
  TopologySpec t;
  t.n = n;
  switch (family) {
    case Family::LeaderTree:
      for (int i = 1; i < n; ++i) t.edges.push_back({i, pick(rng, 0, i - 1), uniform(rng, 0.1, 0.9), 1.0});
      break;
    case Family::Symmetric:
      add_symmetric_block(rng, t, 0);
      break;
    case Family::SymmetricPlusLeader:
      for (int i = 1; i < n; ++i) {
        if (i == 1 || pick(rng, 0, 1)) t.edges.push_back({i, 0, uniform(rng, 0.1, 0.9), 1.0});
      }
      add_symmetric_block(rng, t, 1);
      break;
  }
  t.skew = random_skews(rng, n);
  t.validate();
  return t;
}

inline Family random_family(std::mt19937_64& rng) {
  return static_cast<Family>(pick(rng, 0, 2));
}

/// Gains satisfying (i) and (ii) with some margin.
inline ProtocolParams random_gains(std::mt19937_64& rng) {
  ProtocolParams q;
  q.p = uniform(rng, 0.2, 1.9);
  q.kappa1 = uniform(rng, 0.3, 2.0);
  const double dk_max = 2.0 * q.kappa1 / (3.0 * q.p);
  q.kappa2 = q.kappa1 - uniform(rng, 0.05, 0.95) * std::min(dk_max, q.kappa1);
  return q;
}

struct StableInstance {
  TopologySpec topo;
  ProtocolParams params;
  GraphQuantities gq;
  double rho = 0.0;
};

/// Draws until the deviation dynamics have rho <= rho_cap.
inline StableInstance random_stable_instance(std::mt19937_64& rng, int n_min, int n_max,
                                             double rho_cap) {
  for (;;) {
    StableInstance s;
    s.topo = random_topology(rng, random_family(rng), pick(rng, n_min, n_max));
    s.gq = build_graph_quantities(s.topo);
    s.params = random_gains(rng);
    const double tmax = tau_max_for(s.params, s.gq.mu_max);
    if (!(tmax > 0.0)) continue;  // k2 <= dk p: no tau works
    s.params.tau = uniform(rng, 0.1, 0.8) * std::min(tmax, 20.0);
    const OracleResult o = stability_oracle(build_matrices(s.topo, s.params, s.gq));
    if (o.stable && o.rho_j2 <= rho_cap) {
      s.rho = o.rho_j2;
      return s;
    }
  }
}

}  // namespace skewless::fixtures
