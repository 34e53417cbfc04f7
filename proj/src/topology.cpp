#include "skewless/topology.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace skewless {
namespace {

constexpr double kRankTolerance = 1e-9;

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1) + ")";
}

}  // namespace

void TopologySpec::validate() const {
  if (n < 1) throw std::invalid_argument("topology: node count must be >= 1");
  if (skew.size() != 0 && skew.size() != n) {
    throw std::invalid_argument("topology: skew vector length != node count");
  }
  if (wander_gain.size() != 0 && wander_gain.size() != n) {
    throw std::invalid_argument("topology: wander gain length != node count");
  }
  for (Eigen::Index i = 0; i < skew.size(); ++i) {
    if (!(skew(i) > 0.0)) {
      throw std::invalid_argument("topology: skew of node " + std::to_string(i + 1) +
                                  " must be positive");
    }
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw std::invalid_argument("topology: edge " + edge_name(e) + " references unknown node");
    }
    if (e.from == e.to) {
      throw std::invalid_argument("topology: self edge " + edge_name(e));
    }
    if (!(e.weight > 0.0)) {
      throw std::invalid_argument("topology: edge " + edge_name(e) + " weight must be positive");
    }
    if (!seen.emplace(e.from, e.to).second) {
      throw std::invalid_argument("topology: duplicate edge " + edge_name(e));
    }
  }
}

VectorXd TopologySpec::skews() const {
  return skew.size() == 0 ? VectorXd::Ones(n) : skew;
}

VectorXd TopologySpec::wander_gains() const {
  return wander_gain.size() == 0 ? VectorXd::Ones(n) : wander_gain;
}

int TopologySpec::find_edge(int from, int to) const {
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].from == from && edges[k].to == to) return static_cast<int>(k);
  }
  return -1;
}

MatrixXd laplacian(const TopologySpec& topo) {
  MatrixXd lap = MatrixXd::Zero(topo.n, topo.n);
  for (const Edge& e : topo.edges) {
    lap(e.from, e.to) -= e.weight;
    lap(e.from, e.from) += e.weight;
  }
  return lap;
}

MatrixXd incidence(const TopologySpec& topo) {
  MatrixXd b = MatrixXd::Zero(topo.n, topo.edge_count());
  for (int k = 0; k < topo.edge_count(); ++k) {
    b(topo.edges[k].to, k) = 1.0;
    b(topo.edges[k].from, k) = -1.0;
  }
  return b;
}

std::optional<int> find_leader(const TopologySpec& topo) {
  std::vector<int> out_degree(topo.n, 0);
  std::vector<std::vector<int>> reverse(topo.n);
  for (const Edge& e : topo.edges) {
    ++out_degree[e.from];
    reverse[e.to].push_back(e.from);
  }
  std::optional<int> sink;
  for (int i = 0; i < topo.n; ++i) {
    if (out_degree[i] == 0) {
      if (sink) return std::nullopt;
      sink = i;
    }
  }
  if (!sink) return std::nullopt;

  // Everyone must reach the sink: walk edges backwards from it.
  std::vector<bool> seen(topo.n, false);
  std::vector<int> stack{*sink};
  seen[*sink] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : reverse[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  if (reached != topo.n) return std::nullopt;
  return sink;
}

double mu_max_exact(const TopologySpec& topo) {
  if (topo.edges.empty()) return 0.0;
  return spectral_radius(laplacian(topo) * topo.skews().asDiagonal());
}

double mu_max_gershgorin(const TopologySpec& topo, double r_hat_max) {
  const VectorXd diag = laplacian(topo).diagonal();
  const double alpha_max = diag.size() ? diag.maxCoeff() : 0.0;
  return 2.0 * alpha_max * r_hat_max;
}

VectorXd left_null_vector(const MatrixXd& lap) {
  // (L^T + 11^T/n) v = 1/n is nonsingular when the zero eigenvalue is simple,
  // and its solution already sums to one.
  const auto n = lap.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  MatrixXd system = lap.transpose();
  system.array() += inv_n;
  VectorXd xi = system.fullPivLu().solve(VectorXd::Constant(n, inv_n));
  return xi / xi.sum();
}

GraphQuantities build_graph_quantities(const TopologySpec& topo) {
  topo.validate();
  GraphQuantities gq;
  const int n = topo.n;
  gq.laplacian = laplacian(topo);
  gq.incidence = incidence(topo);
  gq.incidence_neg = gq.incidence.cwiseMin(0.0);
  gq.leader = find_leader(topo);
  gq.alpha_max = gq.laplacian.diagonal().maxCoeff();
  gq.mu_max = mu_max_exact(topo);

  gq.connected = numerical_rank(gq.laplacian, kRankTolerance) == n - 1;
  if (!gq.connected) {
    gq.gamma = std::numeric_limits<double>::quiet_NaN();
    return gq;
  }

  VectorXd xi = left_null_vector(gq.laplacian);
  // With a leader the null vector is exactly e_leader; pin it so that
  // leader-anchored predictions carry no solver round-off.
  if (gq.leader) {
    xi.setZero();
    xi(*gq.leader) = 1.0;
  }
  gq.xi = xi;
  gq.gamma = 1.0 / xi.cwiseQuotient(topo.skews()).sum();
  return gq;
}

}  // namespace skewless
