#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "skewless/analysis.hpp"

namespace skewless {

/// Offset measurement error on one edge, in seconds.
struct JitterModel {
  enum class Kind { None, UniformGrid, Gaussian, Constant };
  Kind kind = Kind::None;
  double max_value = 0.0;  // UniformGrid: eta drawn from {0, grid, ..., max_value}
  double grid = 1e-3;
  double sigma = 0.0;      // Gaussian standard deviation
  double bias = 0.0;       // Constant value w_bar

  static JitterModel none() { return {}; }
  static JitterModel uniform_grid(double max_value, double grid);
  static JitterModel gaussian(double sigma);
  static JitterModel constant(double bias);

  void validate() const;
  /// Ping-pong uniform jitter is (eta_forward - eta_backward) / 2.
  double sample(std::mt19937_64& rng) const;
  double mean() const;
  /// Exact variance of sample().
  double variance() const;
};

struct NoiseSpec {
  JitterModel jitter;  // applies to every edge without an override
  std::map<std::pair<int, int>, JitterModel> edge_jitter;  // keyed by (from, to), zero-based
  double wander_sigma = 0.0;  // std of d_i per step, before g^d_i
  std::uint64_t seed = 1;

  const JitterModel& jitter_for(int from, int to) const;
  void validate() const;
};

/// Collective frequency drift per step, (k1 - k2) * gamma * w~ with
/// w~ = -xi^T B_G^- diag(alpha g^w) w_bar. w_bar is per edge, in seconds.
double drift_rate(const TopologySpec& topo, const GraphQuantities& gq,
                  const ProtocolParams& params, const VectorXd& wbar);

/// Constant-bias fixed point of the deviations: delta x* = N1 L^+ delta w
/// with delta w = -N2 B_G^- diag(alpha g^w) w_bar. Requires a leader and a
/// synchronizing parameter set; throws std::domain_error otherwise.
VectorXd steady_state_offsets(const TopologySpec& topo, const GraphQuantities& gq,
                              const ProtocolParams& params, const VectorXd& wbar);

struct H2Result {
  double f = 0.0;    // output RMS per unit white input, seconds
  double f_y = 0.0;  // same value via the controllability Gramian
  MatrixXd X;        // X = Ahat^T X Ahat + C^T C
  MatrixXd Y;        // Y = Ahat Y Ahat^T + Bhat Bhat^T
  double rho = 0.0;  // rho(Ahat)
};

/// Throws std::domain_error("unstable plant") when rho(Ahat) >= 1.
H2Result h2_norm(const SystemMatrices& m);

struct H2Gradient {
  double f = 0.0;
  double d_kappa1 = 0.0;
  double d_kappa2 = 0.0;
  double d_p = 0.0;
  std::vector<double> d_alpha;  // central differences, only when requested
};

/// Analytic partials with respect to (kappa1, kappa2, p) by the chain rule
/// through grad_Ahat f = X Ahat Y / f and grad_Bhat f = X Bhat / f.
/// Edge-weight partials use central differences because N depends on alpha.
H2Gradient h2_gradient(const TopologySpec& topo, const ProtocolParams& params,
                       bool with_alpha = false, double alpha_step = 1e-6);

/// Value of f alone for (topo, params); convenience for tests and the optimizer.
double h2_value(const TopologySpec& topo, const ProtocolParams& params);

}  // namespace skewless
