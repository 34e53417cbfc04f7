#pragma once

#include <optional>
#include <vector>

#include "skewless/linalg.hpp"

namespace skewless {

/// Directed measurement edge: node `from` measures its offset to node `to`.
/// Node indices are zero-based.
struct Edge {
  int from = 0;
  int to = 0;
  double weight = 1.0;      // alpha_ij > 0
  double noise_gain = 1.0;  // g^w_ij
};

/// Measurement graph plus per-node clock data.
struct TopologySpec {
  int n = 1;
  std::vector<Edge> edges;
  VectorXd skew;         // r_i, defaults to 1 when empty
  VectorXd wander_gain;  // g^d_i, defaults to 1 when empty

  /// Fills defaulted per-node vectors and checks every invariant.
  /// Throws std::invalid_argument naming the first violation.
  void validate() const;

  VectorXd skews() const;
  VectorXd wander_gains() const;
  int edge_count() const { return static_cast<int>(edges.size()); }
  /// Index of edge (from, to) or -1.
  int find_edge(int from, int to) const;
};

/// Quantities derived from the graph. When the graph is not connected
/// (zero eigenvalue of L not simple) `connected` is false and xi/gamma are
/// left empty/NaN.
struct GraphQuantities {
  MatrixXd laplacian;
  MatrixXd incidence;      // B_G, n x m
  MatrixXd incidence_neg;  // min(B_G, 0)
  bool connected = false;
  VectorXd xi;
  double gamma = 0.0;
  std::optional<int> leader;
  double mu_max = 0.0;     // rho(L R)
  double alpha_max = 0.0;  // max_i alpha_ii
};

MatrixXd laplacian(const TopologySpec& topo);

/// Column per edge (i -> j): +1 at j, -1 at i.
MatrixXd incidence(const TopologySpec& topo);

GraphQuantities build_graph_quantities(const TopologySpec& topo);

/// Normalized left null vector of a Laplacian with a simple zero eigenvalue.
VectorXd left_null_vector(const MatrixXd& lap);

/// Unique sink node reachable from every other node, if any.
std::optional<int> find_leader(const TopologySpec& topo);

double mu_max_exact(const TopologySpec& topo);

/// Gershgorin bound 2 * alpha_max * r_hat_max.
double mu_max_gershgorin(const TopologySpec& topo, double r_hat_max);

}  // namespace skewless
