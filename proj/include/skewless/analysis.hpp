#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "skewless/dynamics.hpp"

namespace skewless {

/// Width of the band around rho = 1 that is reported as marginal.
inline constexpr double kMarginalBand = 1e-6;

/// Monic cubic lambda^3 + a2 lambda^2 + a1 lambda + a0 for one eigenvalue nu
/// of tau*L*R. nu is complex for general directed graphs.
struct CharacteristicCubic {
  std::complex<double> nu;
  std::complex<double> a2;
  std::complex<double> a1;
  std::complex<double> a0;

  std::complex<double> operator()(std::complex<double> lambda) const {
    return ((lambda + a2) * lambda + a1) * lambda + a0;
  }
  Eigen::Vector3cd roots() const;
};

CharacteristicCubic characteristic_cubic(std::complex<double> nu, const ProtocolParams& params);

/// One cubic per eigenvalue of tau*L*R; their product is det(lambda I - A).
std::vector<CharacteristicCubic> characteristic_factors(const TopologySpec& topo,
                                                        const ProtocolParams& params);

struct OracleResult {
  double rho_j2 = 0.0;  // rho(N A); the three structural zeros do not count
  bool stable = false;
  bool marginal = false;
};

/// Spectral-radius test on the deviation dynamics plus the structural
/// conditions (connected, kappa1 != kappa2, 0 < p < 2).
OracleResult stability_oracle(const SystemMatrices& m);

struct SyncVerdict {
  bool stable = false;
  bool marginal = false;
  bool connected = false;
  bool real_spectrum = false;
  double rho_j2 = 0.0;             // NaN when not connected
  std::vector<std::string> reasons;
  std::vector<std::complex<double>> nu;
  std::optional<double> tau_max;   // seconds; +inf when mu_max == 0
};

/// Closed-form parameter conditions (i)-(iii) for real-spectrum graphs; the
/// spectral-radius oracle otherwise. rho_j2 is always filled from the oracle
/// when the graph is connected.
SyncVerdict check_theorem2(const TopologySpec& topo, const ProtocolParams& params,
                           const GraphQuantities& gq);

/// Largest admissible tau for a given mu_max: p(k2 - dk p) / (mu_max (k1 - dk p)^2).
double tau_max_for(const ProtocolParams& params, double mu_max);

/// Interlacing test on the bilinear-transformed cubic for a real nu > 0.
/// Throws std::domain_error when (k1 - k2) p == 0.
bool hermite_biehler_stable(double nu, const ProtocolParams& params);

/// Coefficients (a2, a1, a0) of the monic Hurwitz-domain cubic
/// (s-1)^3 g((s+1)/(s-1)) / (dk p nu).
std::array<double, 3> hurwitz_cubic(double nu, const ProtocolParams& params);

/// Topology-free tau bound p(k2 - dk p) / (2 alpha_max r_hat (k1 - dk p)^2).
/// Throws std::invalid_argument listing violated conditions (i)/(ii).
double tau_bound_topology_free(const ProtocolParams& params, double alpha_max, double r_hat_max);

/// Violated conditions among (i) 0 < p < 2 and (ii) 2k1/(3p) > k1 - k2 > 0.
std::vector<std::string> parameter_condition_violations(const ProtocolParams& params);

struct JordanData {
  VectorXd zeta1, zeta2, zeta3;
  VectorXd eta1, eta2, eta3;
};

/// Closed-form right/left chains for eigenvalue 1 and eigenvectors for 1 - p.
/// Throws std::domain_error unless connected, kappa1 != kappa2 and p > 0.
JordanData jordan_vectors(const TopologySpec& topo, const ProtocolParams& params,
                          const GraphQuantities& gq);

struct FixedPoint {
  double x_star = 0.0;  // seconds
  double r_star = 0.0;
};

/// Synchronized line x_i(t_k) -> x* + r* k tau. Throws std::domain_error when
/// the oracle does not report synchronization.
FixedPoint predict_fixed_point(const SystemState& z0, const TopologySpec& topo,
                               const ProtocolParams& params, const GraphQuantities& gq);

}  // namespace skewless
