#include "skewless/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "skewless/lyapunov.hpp"

namespace skewless {
namespace {

constexpr double kPinvTolerance = 1e-10;

long grid_count(const JitterModel& j) {
  return static_cast<long>(std::floor(j.max_value / j.grid + 1e-9)) + 1;
}

VectorXd weighted_gains(const TopologySpec& topo) {
  VectorXd w(topo.edge_count());
  for (int k = 0; k < topo.edge_count(); ++k) {
    w(k) = topo.edges[k].weight * topo.edges[k].noise_gain;
  }
  return w;
}

void check_wbar(const TopologySpec& topo, const VectorXd& wbar) {
  if (wbar.size() != topo.edge_count()) {
    throw std::invalid_argument("bias vector length must equal the edge count");
  }
}

}  // namespace

JitterModel JitterModel::uniform_grid(double max_value, double grid) {
  JitterModel j;
  j.kind = Kind::UniformGrid;
  j.max_value = max_value;
  j.grid = grid;
  return j;
}

JitterModel JitterModel::gaussian(double sigma) {
  JitterModel j;
  j.kind = Kind::Gaussian;
  j.sigma = sigma;
  return j;
}

JitterModel JitterModel::constant(double bias) {
  JitterModel j;
  j.kind = Kind::Constant;
  j.bias = bias;
  return j;
}

void JitterModel::validate() const {
  if (kind == Kind::UniformGrid && (!(max_value >= 0.0) || !(grid > 0.0))) {
    throw std::invalid_argument("jitter: uniform-grid needs max >= 0 and grid > 0");
  }
  if (kind == Kind::Gaussian && !(sigma >= 0.0)) {
    throw std::invalid_argument("jitter: gaussian sigma must be >= 0");
  }
}

double JitterModel::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::None:
      return 0.0;
    case Kind::Constant:
      return bias;
    case Kind::Gaussian: {
      std::normal_distribution<double> dist(0.0, sigma);
      return dist(rng);
    }
    case Kind::UniformGrid: {
      std::uniform_int_distribution<long> dist(0, grid_count(*this) - 1);
      const long forward = dist(rng);
      const long backward = dist(rng);
      return 0.5 * grid * static_cast<double>(forward - backward);
    }
  }
  return 0.0;
}

double JitterModel::mean() const { return kind == Kind::Constant ? bias : 0.0; }

double JitterModel::variance() const {
  switch (kind) {
    case Kind::Gaussian:
      return sigma * sigma;
    case Kind::UniformGrid: {
      // Discrete uniform on K points has variance grid^2 (K^2 - 1) / 12; the
      // half-difference of two independent draws halves it.
      const double k = static_cast<double>(grid_count(*this));
      return 0.5 * grid * grid * (k * k - 1.0) / 12.0;
    }
    default:
      return 0.0;
  }
}

const JitterModel& NoiseSpec::jitter_for(int from, int to) const {
  const auto it = edge_jitter.find({from, to});
  return it == edge_jitter.end() ? jitter : it->second;
}

void NoiseSpec::validate() const {
  jitter.validate();
  for (const auto& [edge, model] : edge_jitter) model.validate();
  if (!(wander_sigma >= 0.0)) throw std::invalid_argument("noise: wander sigma must be >= 0");
}

double drift_rate(const TopologySpec& topo, const GraphQuantities& gq,
                  const ProtocolParams& params, const VectorXd& wbar) {
  check_wbar(topo, wbar);
  if (!gq.connected) throw std::domain_error("drift_rate: graph is not connected");
  const VectorXd drive = -(gq.incidence_neg * weighted_gains(topo).cwiseProduct(wbar));
  const double w_tilde = gq.xi.dot(drive);
  return params.delta_kappa() * gq.gamma * w_tilde;
}

VectorXd steady_state_offsets(const TopologySpec& topo, const GraphQuantities& gq,
                              const ProtocolParams& params, const VectorXd& wbar) {
  check_wbar(topo, wbar);
  if (!gq.connected || !gq.leader) {
    throw std::domain_error("steady_state_offsets: requires a topology with a unique leader");
  }
  if (!stability_oracle(build_matrices(topo, params, gq)).stable) {
    throw std::domain_error("steady_state_offsets: parameters do not synchronize");
  }
  const auto [n1, n2] = projectors(topo, gq);
  const VectorXd delta_w = -(n2 * gq.incidence_neg * weighted_gains(topo).cwiseProduct(wbar));
  return n1 * pseudo_inverse(gq.laplacian, kPinvTolerance) * delta_w;
}

H2Result h2_norm(const SystemMatrices& m) {
  H2Result r;
  r.rho = spectral_radius(m.Ahat);
  if (r.rho >= 1.0) throw std::domain_error("unstable plant: rho(Ahat) >= 1");
  MatrixXd b(m.Bw.rows(), m.Bw.cols() + m.Bd.cols());
  b << m.Bw, m.Bd;
  const MatrixXd bhat = m.N * b;
  r.X = discrete_lyapunov_observability(m.Ahat, m.C.transpose() * m.C);
  r.Y = discrete_lyapunov_controllability(m.Ahat, bhat * bhat.transpose());
  r.f = std::sqrt(std::max(0.0, (r.X * bhat * bhat.transpose()).trace()));
  r.f_y = std::sqrt(std::max(0.0, (m.C * r.Y * m.C.transpose()).trace()));
  return r;
}

double h2_value(const TopologySpec& topo, const ProtocolParams& params) {
  const GraphQuantities gq = build_graph_quantities(topo);
  return h2_norm(build_matrices(topo, params, gq)).f;
}

H2Gradient h2_gradient(const TopologySpec& topo, const ProtocolParams& params, bool with_alpha,
                       double alpha_step) {
  const GraphQuantities gq = build_graph_quantities(topo);
  const SystemMatrices m = build_matrices(topo, params, gq);
  const H2Result h = h2_norm(m);
  if (h.f == 0.0) throw std::domain_error("gradient undefined at zero norm");

  const int n = topo.n;
  const int edges = topo.edge_count();
  MatrixXd b(m.Bw.rows(), m.Bw.cols() + m.Bd.cols());
  b << m.Bw, m.Bd;
  const MatrixXd bhat = m.N * b;
  const MatrixXd grad_a = h.X * m.Ahat * h.Y / h.f;
  const MatrixXd grad_b = h.X * bhat / h.f;

  // A and B are affine in each gain, so dAhat = N dA and dBhat = N dB are constant.
  const MatrixXd& lap = gq.laplacian;
  const MatrixXd& proj = m.N;
  const MatrixXd drive = gq.incidence_neg * weighted_gains(topo).asDiagonal();

  MatrixXd da_k1 = MatrixXd::Zero(3 * n, 3 * n);
  da_k1.block(n, 0, n, n) = -lap;
  MatrixXd db_k1 = MatrixXd::Zero(3 * n, edges + n);
  db_k1.block(n, 0, n, edges) = -drive;

  MatrixXd da_k2 = MatrixXd::Zero(3 * n, 3 * n);
  da_k2.block(n, 2 * n, n, n) = -MatrixXd::Identity(n, n);

  MatrixXd da_p = MatrixXd::Zero(3 * n, 3 * n);
  da_p.block(2 * n, 0, n, n) = -lap;
  da_p.block(2 * n, 2 * n, n, n) = -MatrixXd::Identity(n, n);
  MatrixXd db_p = MatrixXd::Zero(3 * n, edges + n);
  db_p.block(2 * n, 0, n, edges) = -drive;

  auto inner = [](const MatrixXd& g, const MatrixXd& d) { return g.cwiseProduct(d).sum(); };

  H2Gradient out;
  out.f = h.f;
  out.d_kappa1 = inner(grad_a, proj * da_k1) + inner(grad_b, proj * db_k1);
  out.d_kappa2 = inner(grad_a, proj * da_k2);
  out.d_p = inner(grad_a, proj * da_p) + inner(grad_b, proj * db_p);

  if (with_alpha) {
    out.d_alpha.resize(edges);
    for (int k = 0; k < edges; ++k) {
      TopologySpec plus = topo;
      TopologySpec minus = topo;
      const double h_step = alpha_step * std::max(1.0, topo.edges[k].weight);
      plus.edges[k].weight += h_step;
      minus.edges[k].weight -= h_step;
      out.d_alpha[k] = (h2_value(plus, params) - h2_value(minus, params)) / (2.0 * h_step);
    }
  }
  return out;
}

}  // namespace skewless
