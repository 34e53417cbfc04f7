#include "skewless/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace skewless {

void ProtocolParams::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("params: tau must be positive");
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2) || !std::isfinite(p)) {
    throw std::invalid_argument("params: kappa1, kappa2 and p must be finite");
  }
}

SystemState SystemState::zeros(int n) {
  return SystemState{VectorXd::Zero(n), VectorXd::Zero(n), VectorXd::Zero(n), 0};
}

VectorXd SystemState::stacked() const {
  VectorXd z(3 * x.size());
  z << x, s, y;
  return z;
}

SystemState SystemState::from_stacked(const VectorXd& z, long k) {
  if (z.size() % 3 != 0) throw std::invalid_argument("state length must be a multiple of 3");
  const auto n = z.size() / 3;
  return SystemState{z.segment(0, n), z.segment(n, n), z.segment(2 * n, n), k};
}

MatrixXd system_matrix(const TopologySpec& topo, const ProtocolParams& params) {
  const int n = topo.n;
  const MatrixXd lap = laplacian(topo);
  const MatrixXd eye = MatrixXd::Identity(n, n);
  MatrixXd a = MatrixXd::Zero(3 * n, 3 * n);
  a.block(0, 0, n, n) = eye;
  a.block(0, n, n, n) = params.tau * topo.skews().asDiagonal().toDenseMatrix();
  a.block(n, 0, n, n) = -params.kappa1 * lap;
  a.block(n, n, n, n) = eye;
  a.block(n, 2 * n, n, n) = -params.kappa2 * eye;
  a.block(2 * n, 0, n, n) = -params.p * lap;
  a.block(2 * n, 2 * n, n, n) = (1.0 - params.p) * eye;
  return a;
}

std::pair<MatrixXd, MatrixXd> projectors(const TopologySpec& topo, const GraphQuantities& gq) {
  if (!gq.connected) throw std::domain_error("xi not unique: graph is not connected");
  const int n = topo.n;
  const VectorXd r_inv = topo.skews().cwiseInverse();
  const VectorXd ones = VectorXd::Ones(n);
  MatrixXd n1 = MatrixXd::Identity(n, n) - gq.gamma * ones * gq.xi.cwiseProduct(r_inv).transpose();
  MatrixXd n2 = MatrixXd::Identity(n, n) - gq.gamma * r_inv * gq.xi.transpose();
  return {std::move(n1), std::move(n2)};
}

SystemMatrices build_matrices(const TopologySpec& topo, const ProtocolParams& params,
                              const GraphQuantities& gq) {
  params.validate();
  if (!gq.connected) throw std::domain_error("xi not unique: graph is not connected");
  const int n = topo.n;
  const int m = topo.edge_count();

  SystemMatrices sm;
  sm.params = params;
  sm.connected = true;
  sm.reference = gq.leader.value_or(0);
  sm.A = system_matrix(topo, params);

  const auto [n1, n2] = projectors(topo, gq);
  sm.N = MatrixXd::Zero(3 * n, 3 * n);
  sm.N.block(0, 0, n, n) = n1;
  sm.N.block(n, n, n, n) = n2;
  sm.N.block(2 * n, 2 * n, n, n) = n2;
  sm.Ahat = sm.N * sm.A;

  sm.Atilde << 1.0, params.tau, 0.0,
               0.0, 1.0, -params.kappa2,
               0.0, 0.0, 1.0 - params.p;

  VectorXd weighted(m);
  for (int k = 0; k < m; ++k) weighted(k) = topo.edges[k].weight * topo.edges[k].noise_gain;
  const MatrixXd drive = gq.incidence_neg * weighted.asDiagonal();
  sm.Bw = MatrixXd::Zero(3 * n, m);
  sm.Bw.block(n, 0, n, m) = -params.kappa1 * drive;
  sm.Bw.block(2 * n, 0, n, m) = -params.p * drive;

  // Wander enters the skew directly (beta_i = 1).
  sm.Bd = MatrixXd::Zero(3 * n, n);
  sm.Bd.block(n, 0, n, n) = topo.wander_gains().asDiagonal();

  sm.C = MatrixXd::Zero(n - 1, 3 * n);
  int row = 0;
  for (int i = 0; i < n; ++i) {
    if (i == sm.reference) continue;
    sm.C(row, i) = 1.0;
    sm.C(row, sm.reference) = -1.0;
    ++row;
  }
  return sm;
}

SystemState step_matrix(const SystemState& z, const SystemMatrices& m) {
  if (3 * z.size() != m.A.rows()) throw std::invalid_argument("step_matrix: dimension mismatch");
  return SystemState::from_stacked(m.A * z.stacked(), z.k + 1);
}

std::vector<double> true_offsets(const SystemState& z, const TopologySpec& topo) {
  std::vector<double> d;
  d.reserve(topo.edges.size());
  for (const Edge& e : topo.edges) d.push_back(z.x(e.to) - z.x(e.from));
  return d;
}

SystemState step_algorithm1(const SystemState& z, const TopologySpec& topo,
                            const ProtocolParams& params, std::span<const double> offsets) {
  if (offsets.size() != topo.edges.size()) {
    throw std::invalid_argument("step_algorithm1: expected " + std::to_string(topo.edges.size()) +
                                " offsets, got " + std::to_string(offsets.size()));
  }
  const int n = z.size();
  VectorXd weighted_sum = VectorXd::Zero(n);
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    if (std::isnan(offsets[k])) {
      throw std::invalid_argument("step_algorithm1: missing offset for edge " +
                                  std::to_string(topo.edges[k].from + 1) + "->" +
                                  std::to_string(topo.edges[k].to + 1));
    }
    weighted_sum(topo.edges[k].from) += topo.edges[k].weight * offsets[k];
  }
  const VectorXd r = topo.skews();
  SystemState next;
  next.k = z.k + 1;
  next.x = z.x + params.tau * r.cwiseProduct(z.s);
  next.s = z.s + params.kappa1 * weighted_sum - params.kappa2 * z.y;
  next.y = params.p * weighted_sum + (1.0 - params.p) * z.y;
  return next;
}

Decomposition decompose(const SystemState& z, const TopologySpec& topo, const GraphQuantities& gq) {
  if (!gq.connected) throw std::domain_error("xi not unique: graph is not connected");
  const int n = z.size();
  const VectorXd r_inv = topo.skews().cwiseInverse();
  Decomposition d;
  d.collective(0) = gq.gamma * gq.xi.dot(z.x.cwiseProduct(r_inv));
  d.collective(1) = gq.gamma * gq.xi.dot(z.s);
  d.collective(2) = gq.gamma * gq.xi.dot(z.y);
  d.deviation.resize(3 * n);
  d.deviation.segment(0, n) = z.x - d.collective(0) * VectorXd::Ones(n);
  d.deviation.segment(n, n) = z.s - d.collective(1) * r_inv;
  d.deviation.segment(2 * n, n) = z.y - d.collective(2) * r_inv;
  return d;
}

SystemState compose(const Decomposition& d, const TopologySpec& topo) {
  const int n = topo.n;
  const VectorXd r_inv = topo.skews().cwiseInverse();
  SystemState z;
  z.x = d.deviation.segment(0, n) + d.collective(0) * VectorXd::Ones(n);
  z.s = d.deviation.segment(n, n) + d.collective(1) * r_inv;
  z.y = d.deviation.segment(2 * n, n) + d.collective(2) * r_inv;
  return z;
}

SystemState step_naive(const SystemState& z, const TopologySpec& topo, const ProtocolParams& params) {
  const std::vector<double> d = true_offsets(z, topo);
  VectorXd weighted_sum = VectorXd::Zero(z.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    weighted_sum(topo.edges[k].from) += topo.edges[k].weight * d[k];
  }
  SystemState next = z;
  next.k = z.k + 1;
  next.x = z.x + params.tau * topo.skews().cwiseProduct(z.s);
  next.s = z.s + params.kappa1 * weighted_sum;
  return next;
}

MatrixXd naive_matrix(const TopologySpec& topo, const ProtocolParams& params) {
  const int n = topo.n;
  MatrixXd a = MatrixXd::Zero(2 * n, 2 * n);
  a.block(0, 0, n, n).setIdentity();
  a.block(0, n, n, n) = params.tau * topo.skews().asDiagonal().toDenseMatrix();
  a.block(n, 0, n, n) = -params.kappa1 * laplacian(topo);
  a.block(n, n, n, n).setIdentity();
  return a;
}

}  // namespace skewless
