#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "skewless/analysis.hpp"
#include "skewless/scenarios.hpp"

using namespace skewless;

namespace {

double max_root_modulus(const CharacteristicCubic& g) {
  return g.roots().cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Analysis, CubicRootsInsideForClientServer) {
  const auto g = characteristic_cubic(0.7, default_params(1.0));
  EXPECT_LT(max_root_modulus(g), 1.0);
  const auto g13 = characteristic_cubic(0.7 * 1.3, default_params(1.3));
  EXPECT_GE(max_root_modulus(g13), 1.0);
}

TEST(Analysis, CubicMatchesSpectrumOfA) {
  // The roots of all factors together are the eigenvalues of A.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const TopologySpec t = fixtures::random_topology(rng, fixtures::random_family(rng), 4);
    ProtocolParams q = fixtures::random_gains(rng);
    q.tau = fixtures::uniform(rng, 0.2, 1.0);
    const VectorXcd eig = eigenvalues(system_matrix(t, q));
    for (const CharacteristicCubic& g : characteristic_factors(t, q)) {
      for (int r = 0; r < 3; ++r) {
        double nearest = 1e300;
        for (int i = 0; i < eig.size(); ++i) nearest = std::min(nearest, std::abs(eig(i) - g.roots()(r)));
        EXPECT_LT(nearest, 1e-6);
      }
    }
  }
}

TEST(Analysis, OracleExamples) {
  auto oracle = [](const TopologySpec& t, double tau) {
    return stability_oracle(build_matrices(t, default_params(tau), build_graph_quantities(t)));
  };
  EXPECT_TRUE(oracle(client_server(0.7), 1.0).stable);
  EXPECT_FALSE(oracle(leader_loop(0.7), 1.0).stable);
  EXPECT_TRUE(oracle(leader_loop(0.7), 0.5).stable);
}

TEST(Analysis, OracleRejectsEqualGains) {
  const TopologySpec t = client_server();
  ProtocolParams q = default_params(1.0);
  q.kappa2 = q.kappa1;
  EXPECT_FALSE(stability_oracle(build_matrices(t, q, build_graph_quantities(t))).stable);
}

TEST(Analysis, TauMaxValues) {
  const ProtocolParams q = default_params(1.0);
  // Hand evaluation: p (k2 - dk p) / (k1 - dk p)^2 = 0.99 * 0.901 / 1.001^2
  const double c = 0.99 * (1.0 - 0.1 * 0.99) / ((1.1 - 0.1 * 0.99) * (1.1 - 0.1 * 0.99));
  EXPECT_NEAR(c, 0.890209, 1e-6);
  EXPECT_NEAR(tau_max_for(q, 0.7), 1.2717, 1.2717 * 1e-3);
  const SyncVerdict cs = check_theorem2(client_server(0.7), q, build_graph_quantities(client_server(0.7)));
  ASSERT_TRUE(cs.tau_max.has_value());
  EXPECT_NEAR(*cs.tau_max, c / 0.7, 1e-12);
  EXPECT_TRUE(cs.stable);
  const SyncVerdict loop = check_theorem2(leader_loop(0.7), q, build_graph_quantities(leader_loop(0.7)));
  ASSERT_TRUE(loop.tau_max.has_value());
  EXPECT_NEAR(*loop.tau_max, 0.8478, 0.8478 * 1e-3);
  EXPECT_FALSE(loop.stable);
  EXPECT_FALSE(loop.reasons.empty());
}

TEST(Analysis, TopologyFreeBound) {
  EXPECT_NEAR(tau_bound_topology_free(default_params(1.0), 0.7, 1.0), 0.6359, 0.6359 * 1e-3);
  ProtocolParams bad = default_params(1.0);
  bad.p = 2.5;
  bad.kappa2 = 1.2;
  try {
    tau_bound_topology_free(bad, 0.7, 1.0);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& ex) {
    const std::string what = ex.what();
    EXPECT_NE(what.find("(i)"), std::string::npos);
    EXPECT_NE(what.find("(ii)"), std::string::npos);
  }
}

TEST(Analysis, ParameterConditions) {
  EXPECT_TRUE(parameter_condition_violations(default_params(1.0)).empty());
  ProtocolParams q = default_params(1.0);
  q.p = 0.0;
  EXPECT_EQ(parameter_condition_violations(q).size(), 1u);
  q = default_params(1.0);
  q.kappa2 = 1.2;
  EXPECT_EQ(parameter_condition_violations(q).size(), 1u);
}

TEST(Analysis, HermiteBiehlerExamples) {
  const ProtocolParams q = default_params(1.0);
  EXPECT_TRUE(hermite_biehler_stable(0.7, q));
  EXPECT_FALSE(hermite_biehler_stable(1.05, q));
  ProtocolParams degenerate = q;
  degenerate.kappa2 = degenerate.kappa1;
  EXPECT_THROW(hermite_biehler_stable(0.7, degenerate), std::domain_error);
  EXPECT_THROW(hermite_biehler_stable(-1.0, q), std::invalid_argument);
}

TEST(Analysis, HurwitzCubicIsBilinearImage) {
  // (s-1)^3 g((s+1)/(s-1)) / (dk p nu) evaluated directly at a few points.
  const ProtocolParams q = default_params(1.0);
  const double nu = 0.6;
  const auto h = hurwitz_cubic(nu, q);
  const auto g = characteristic_cubic(nu, q);
  for (double s : {-2.0, 0.3, 3.0, 5.5}) {
    const std::complex<double> lambda = (s + 1.0) / (s - 1.0);
    const std::complex<double> lhs = std::pow(s - 1.0, 3) * g(lambda) / (q.delta_kappa() * q.p * nu);
    const double rhs = ((s + h[0]) * s + h[1]) * s + h[2];
    EXPECT_NEAR(lhs.real(), rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Analysis, SpectralRadiusAgreesWithCubics) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const TopologySpec t = fixtures::random_topology(rng, fixtures::random_family(rng), 5);
    ProtocolParams q = fixtures::random_gains(rng);
    q.tau = fixtures::uniform(rng, 0.1, 2.0);
    const GraphQuantities gq = build_graph_quantities(t);
    double rho = 0.0;
    for (const auto& g : characteristic_factors(t, q)) {
      if (std::abs(g.nu) < 1e-12) continue;  // collective modes, removed by N
      rho = std::max(rho, max_root_modulus(g));
    }
    EXPECT_NEAR(stability_oracle(build_matrices(t, q, gq)).rho_j2, rho, 1e-6);
  }
}

TEST(Analysis, ComplexSpectrumFallsBackToOracle) {
  // Directed 3-cycle: L R has complex eigenvalues.
  TopologySpec t;
  t.n = 3;
  t.edges = {{0, 1, 0.3, 1.0}, {1, 2, 0.3, 1.0}, {2, 0, 0.3, 1.0}};
  const GraphQuantities gq = build_graph_quantities(t);
  const SyncVerdict v = check_theorem2(t, default_params(0.5), gq);
  EXPECT_FALSE(v.real_spectrum);
  EXPECT_FALSE(v.tau_max.has_value());
  EXPECT_EQ(v.stable, stability_oracle(build_matrices(t, default_params(0.5), gq)).stable);
}

TEST(Analysis, DisconnectedVerdict) {
  TopologySpec t;
  t.n = 3;
  t.edges = {{1, 0, 0.7, 1.0}};
  const SyncVerdict v = check_theorem2(t, default_params(1.0), build_graph_quantities(t));
  EXPECT_FALSE(v.connected);
  EXPECT_FALSE(v.stable);
  EXPECT_FALSE(v.reasons.empty());
}

TEST(Analysis, JordanChainOnLoop) {
  const TopologySpec t = leader_loop(0.7);
  const ProtocolParams q = default_params(0.5);
  const GraphQuantities gq = build_graph_quantities(t);
  const JordanData j = jordan_vectors(t, q, gq);
  const MatrixXd a = system_matrix(t, q);
  VectorXd one_zero_zero = VectorXd::Zero(9);
  one_zero_zero.head(3).setOnes();
  EXPECT_EQ(j.zeta1, one_zero_zero);
  VectorXd eta3 = VectorXd::Zero(9);
  eta3.tail(3) = gq.gamma * gq.xi;
  EXPECT_NEAR((j.eta3 - eta3).norm(), 0.0, 1e-15);
  EXPECT_NEAR((a * j.zeta2 - j.zeta1 - j.zeta2).norm(), 0.0, 1e-12);
  ProtocolParams degenerate = q;
  degenerate.kappa2 = q.kappa1;
  EXPECT_THROW(jordan_vectors(t, degenerate, gq), std::domain_error);
}

TEST(Analysis, LeaderFixedPointIsTrueTime) {
  const TopologySpec t = leader_loop(0.7);
  TopologySpec skewed = t;
  skewed.skew = Eigen::Vector3d(1.00003, 1.0001, 0.9999);
  const GraphQuantities gq = build_graph_quantities(skewed);
  SystemState z = SystemState::zeros(3);
  z.x << 12.5, 13.0, 11.0;
  z.s << 1.0 / 1.00003, 1.0, 1.0;
  const FixedPoint fp = predict_fixed_point(z, skewed, default_params(0.5), gq);
  EXPECT_EQ(fp.x_star, 12.5);
  EXPECT_EQ(fp.r_star, 1.0);
  EXPECT_THROW(predict_fixed_point(z, skewed, default_params(1.0), gq), std::domain_error);
}

TEST(Analysis, FixedPointMatchesLongRun) {
  std::mt19937_64 rng(23);
  const fixtures::StableInstance s = fixtures::random_stable_instance(rng, 5, 5, 0.95);
  SystemState z = SystemState::zeros(5);
  for (int i = 0; i < 5; ++i) {
    z.x(i) = fixtures::uniform(rng, -1e-3, 1e-3);
    z.s(i) = 1.0 + fixtures::uniform(rng, -1e-4, 1e-4);
  }
  const FixedPoint fp = predict_fixed_point(z, s.topo, s.params, s.gq);
  const SystemMatrices m = build_matrices(s.topo, s.params, s.gq);
  long k = 0;
  const long steps = static_cast<long>(std::ceil(std::log(1e-16) / std::log(s.rho))) + 50;
  for (; k < steps; ++k) z = step_matrix(z, m);
  const double t = static_cast<double>(k) * s.params.tau;
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(z.x(i) - fp.r_star * t, fp.x_star, 1e-9);
}
