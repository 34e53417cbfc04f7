#include "skewless/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace skewless {
namespace {

constexpr double kImagTolerance = 1e-9;

}  // namespace

Eigen::Vector3cd CharacteristicCubic::roots() const { return cubic_roots(a2, a1, a0); }

CharacteristicCubic characteristic_cubic(std::complex<double> nu, const ProtocolParams& params) {
  // (l-1)^2 (l-1+p) + ((l-1) k1 + p dk) nu, expanded.
  const double p = params.p;
  CharacteristicCubic c;
  c.nu = nu;
  c.a2 = p - 3.0;
  c.a1 = 3.0 - 2.0 * p + params.kappa1 * nu;
  c.a0 = p - 1.0 + (p * params.delta_kappa() - params.kappa1) * nu;
  return c;
}

std::vector<CharacteristicCubic> characteristic_factors(const TopologySpec& topo,
                                                        const ProtocolParams& params) {
  const MatrixXd tlr = params.tau * laplacian(topo) * topo.skews().asDiagonal();
  const VectorXcd nu = eigenvalues(tlr);
  std::vector<CharacteristicCubic> out;
  out.reserve(nu.size());
  for (Eigen::Index l = 0; l < nu.size(); ++l) out.push_back(characteristic_cubic(nu(l), params));
  return out;
}

OracleResult stability_oracle(const SystemMatrices& m) {
  OracleResult r;
  if (!m.connected) {
    r.rho_j2 = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.rho_j2 = spectral_radius(m.Ahat);
  const ProtocolParams& pp = m.params;
  const bool structural = pp.kappa1 != pp.kappa2 && pp.p > 0.0 && pp.p < 2.0;
  r.marginal = std::abs(r.rho_j2 - 1.0) <= kMarginalBand;
  r.stable = structural && r.rho_j2 < 1.0 && !r.marginal;
  return r;
}

std::vector<std::string> parameter_condition_violations(const ProtocolParams& params) {
  std::vector<std::string> out;
  const double p = params.p;
  const double dk = params.delta_kappa();
  if (!(p > 0.0 && p < 2.0)) out.emplace_back("(i) p outside (0, 2)");
  if (dk == 0.0) {
    out.emplace_back("(ii) delta kappa = 0");
  } else if (!(dk > 0.0)) {
    out.emplace_back("(ii) kappa1 - kappa2 <= 0");
  } else if (!(2.0 * params.kappa1 / (3.0 * p) > dk)) {
    out.emplace_back("(ii) kappa1 - kappa2 >= 2 kappa1 / (3 p)");
  }
  return out;
}

double tau_max_for(const ProtocolParams& params, double mu_max) {
  const double p = params.p;
  const double dk = params.delta_kappa();
  const double num = p * (params.kappa2 - dk * p);
  const double den_root = params.kappa1 - dk * p;
  if (mu_max == 0.0) return std::numeric_limits<double>::infinity();
  return num / (mu_max * den_root * den_root);
}

SyncVerdict check_theorem2(const TopologySpec& topo, const ProtocolParams& params,
                           const GraphQuantities& gq) {
  params.validate();
  SyncVerdict v;
  v.connected = gq.connected;
  const MatrixXd lr = gq.laplacian * topo.skews().asDiagonal();
  const VectorXcd mu = eigenvalues(lr);
  for (Eigen::Index l = 0; l < mu.size(); ++l) v.nu.push_back(params.tau * mu(l));

  const double scale = lr.norm();
  double max_imag = 0.0;
  for (Eigen::Index l = 0; l < mu.size(); ++l) max_imag = std::max(max_imag, std::abs(mu(l).imag()));
  v.real_spectrum = max_imag <= kImagTolerance * std::max(scale, 1.0);

  if (!gq.connected) {
    v.rho_j2 = std::numeric_limits<double>::quiet_NaN();
    v.reasons.emplace_back("graph not connected");
    return v;
  }

  const OracleResult oracle = stability_oracle(build_matrices(topo, params, gq));
  v.rho_j2 = oracle.rho_j2;
  v.marginal = oracle.marginal;

  if (!v.real_spectrum) {
    // Closed-form conditions only hold for real spectra.
    v.stable = oracle.stable;
    if (!oracle.stable) {
      for (auto& r : parameter_condition_violations(params)) v.reasons.push_back(std::move(r));
      if (oracle.rho_j2 >= 1.0 - kMarginalBand) v.reasons.emplace_back("rho(J2) >= 1");
    }
    return v;
  }

  double mu_max = 0.0;
  for (Eigen::Index l = 0; l < mu.size(); ++l) mu_max = std::max(mu_max, mu(l).real());
  v.reasons = parameter_condition_violations(params);
  if (v.reasons.empty()) {
    v.tau_max = tau_max_for(params, mu_max);
    if (!(params.tau < *v.tau_max)) v.reasons.emplace_back("(iii) tau >= tau_max");
  }
  v.stable = v.reasons.empty() && !v.marginal;
  return v;
}

std::array<double, 3> hurwitz_cubic(double nu, const ProtocolParams& params) {
  const double dk = params.delta_kappa();
  const double p = params.p;
  const double k1 = params.kappa1;
  if (dk * p == 0.0) throw std::domain_error("degenerate transform: (kappa1 - kappa2) p = 0");
  const double b = 2.0 * k1 / (dk * p);
  return {b - 3.0, 4.0 / (dk * nu) + 3.0 - 2.0 * b, 4.0 * (2.0 - p) / (dk * p * nu) + b - 1.0};
}

bool hermite_biehler_stable(double nu, const ProtocolParams& params) {
  if (!(nu > 0.0)) throw std::invalid_argument("hermite_biehler_stable: nu must be positive");
  const auto [c2, c1, c0] = hurwitz_cubic(nu, params);
  // P(jw) = Pr(w) + j Pi(w) with Pr = -c2 w^2 + c0 and Pi = -w^3 + c1 w.
  if (!(c2 > 0.0)) return false;
  const double omega_r = c0 / c2;
  const double omega_i = c1;
  return omega_r > 0.0 && omega_r < omega_i;
}

double tau_bound_topology_free(const ProtocolParams& params, double alpha_max, double r_hat_max) {
  const auto violations = parameter_condition_violations(params);
  if (!violations.empty()) {
    std::string msg = "tau bound requires conditions (i)-(ii):";
    for (const auto& v : violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }
  return tau_max_for(params, 2.0 * alpha_max * r_hat_max);
}

JordanData jordan_vectors(const TopologySpec& topo, const ProtocolParams& params,
                          const GraphQuantities& gq) {
  if (!gq.connected || params.kappa1 == params.kappa2 || !(params.p > 0.0)) {
    throw std::domain_error("jordan_vectors: requires a connected graph, kappa1 != kappa2, p > 0");
  }
  const int n = topo.n;
  const double tau = params.tau;
  const double k2 = params.kappa2;
  const double p = params.p;
  const VectorXd ones = VectorXd::Ones(n);
  const VectorXd r_inv = topo.skews().cwiseInverse();
  const VectorXd& xi = gq.xi;
  const double g = gq.gamma;

  auto stack = [n](const VectorXd& a, const VectorXd& b, const VectorXd& c) {
    VectorXd v(3 * n);
    v << a, b, c;
    return v;
  };
  const VectorXd zero = VectorXd::Zero(n);

  JordanData j;
  j.zeta1 = stack(ones, zero, zero);
  j.zeta2 = stack(ones, r_inv / tau, zero);
  j.zeta3 = stack(-tau * k2 / (p * p) * ones, k2 / p * r_inv, r_inv);
  j.eta1 = g * stack(r_inv.cwiseProduct(xi), -tau * xi, tau * k2 * (1.0 / p + 1.0 / (p * p)) * xi);
  j.eta2 = g * stack(zero, tau * xi, -tau * k2 / p * xi);
  j.eta3 = g * stack(zero, zero, xi);
  return j;
}

FixedPoint predict_fixed_point(const SystemState& z0, const TopologySpec& topo,
                               const ProtocolParams& params, const GraphQuantities& gq) {
  if (!gq.connected) throw std::domain_error("predict_fixed_point: graph is not connected");
  const OracleResult oracle = stability_oracle(build_matrices(topo, params, gq));
  if (!oracle.stable) throw std::domain_error("predict_fixed_point: system does not synchronize");
  const VectorXd r_inv = topo.skews().cwiseInverse();
  const double k2 = params.kappa2;
  const double p = params.p;
  FixedPoint fp;
  fp.x_star = gq.gamma * gq.xi.dot(z0.x.cwiseProduct(r_inv) + params.tau * k2 / (p * p) * z0.y);
  fp.r_star = gq.gamma * gq.xi.dot(z0.s - k2 / p * z0.y);
  return fp;
}

}  // namespace skewless
