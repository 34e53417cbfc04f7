#pragma once

#include <span>
#include <utility>

#include "skewless/topology.hpp"

namespace skewless {

/// Gains of the skewless update. tau is the poll interval in seconds.
struct ProtocolParams {
  double kappa1 = 1.1;
  double kappa2 = 1.0;
  double p = 0.99;
  double tau = 1.0;

  double delta_kappa() const { return kappa1 - kappa2; }
  /// Only tau > 0 is required; stability is the analysis module's business.
  void validate() const;
};

/// Per-node clock state at step k. x and y are in seconds, s is dimensionless.
struct SystemState {
  VectorXd x;
  VectorXd s;
  VectorXd y;
  long k = 0;

  static SystemState zeros(int n);
  /// z = [x; s; y].
  VectorXd stacked() const;
  static SystemState from_stacked(const VectorXd& z, long k = 0);
  int size() const { return static_cast<int>(x.size()); }
};

struct SystemMatrices {
  ProtocolParams params;
  bool connected = false;
  int reference = 0;  // node the performance map C is measured against
  MatrixXd A;         // 3n x 3n one-step matrix
  MatrixXd N;         // blockdiag(N1, N2, N2)
  MatrixXd Ahat;      // N A
  Eigen::Matrix3d Atilde;
  MatrixXd Bw;  // 3n x m
  MatrixXd Bd;  // 3n x n
  MatrixXd C;   // (n-1) x 3n, rows x_i - x_reference
};

/// The 3n x 3n matrix A alone; defined for any topology.
MatrixXd system_matrix(const TopologySpec& topo, const ProtocolParams& params);

/// N1 = I - gamma 1 xi^T R^-1 and N2 = I - gamma R^-1 1 xi^T.
std::pair<MatrixXd, MatrixXd> projectors(const TopologySpec& topo, const GraphQuantities& gq);

/// Full set of system matrices. Throws std::domain_error ("xi not unique")
/// when the graph is not connected.
SystemMatrices build_matrices(const TopologySpec& topo, const ProtocolParams& params,
                              const GraphQuantities& gq);

SystemState step_matrix(const SystemState& z, const SystemMatrices& m);

/// One step of the per-node update driven by measured offsets, one per edge
/// in topo.edges order (D_ij plus any measurement error). NaN marks a
/// missing measurement and is rejected.
SystemState step_algorithm1(const SystemState& z, const TopologySpec& topo,
                            const ProtocolParams& params, std::span<const double> offsets);

/// Noiseless offsets D_ij = x_j - x_i for every edge.
std::vector<double> true_offsets(const SystemState& z, const TopologySpec& topo);

struct Decomposition {
  Eigen::Vector3d collective;  // (x~, s~, y~)
  VectorXd deviation;          // delta z, length 3n
};

Decomposition decompose(const SystemState& z, const TopologySpec& topo, const GraphQuantities& gq);

/// Inverse of decompose.
SystemState compose(const Decomposition& d, const TopologySpec& topo);

/// Offset-only skew correction (u^s = kappa1 * sum alpha D) with no
/// smoothing state; y is carried through untouched.
SystemState step_naive(const SystemState& z, const TopologySpec& topo, const ProtocolParams& params);

/// 2n x 2n matrix of the naive rule acting on [x; s].
MatrixXd naive_matrix(const TopologySpec& topo, const ProtocolParams& params);

}  // namespace skewless
