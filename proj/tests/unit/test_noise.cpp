#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "skewless/noise.hpp"
#include "skewless/scenarios.hpp"
#include "skewless/sim.hpp"

using namespace skewless;

namespace {

TopologySpec symmetric_pair() {
  TopologySpec t;
  t.n = 2;
  t.edges = {{0, 1, 1.0, 1.0}, {1, 0, 1.0, 1.0}};
  return t;
}

}  // namespace

TEST(Jitter, UniformGridMoments) {
  const JitterModel j = JitterModel::uniform_grid(10e-3, 1e-3);
  std::mt19937_64 rng(41);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double v = j.sample(rng);
    // (eta_f - eta_b) / 2 lives on a half-millisecond grid
    EXPECT_NEAR(std::round(v / 0.5e-3) * 0.5e-3, v, 1e-15);
    EXPECT_LE(std::abs(v), 5e-3 + 1e-15);
    sum += v;
    sum_sq += v * v;
  }
  EXPECT_NEAR(sum / count, 0.0, 3e-5);
  // K = 11 grid values: var = 0.5 grid^2 (K^2 - 1) / 12 = 5e-6
  EXPECT_DOUBLE_EQ(j.variance(), 0.5 * 1e-6 * 120.0 / 12.0);
  EXPECT_NEAR(sum_sq / count, j.variance(), 0.02 * j.variance());
}

TEST(Jitter, OtherModels) {
  std::mt19937_64 rng(42);
  EXPECT_EQ(JitterModel::none().sample(rng), 0.0);
  EXPECT_EQ(JitterModel::constant(-1e-5).sample(rng), -1e-5);
  EXPECT_EQ(JitterModel::constant(-1e-5).mean(), -1e-5);
  EXPECT_EQ(JitterModel::constant(-1e-5).variance(), 0.0);
  EXPECT_DOUBLE_EQ(JitterModel::gaussian(2e-3).variance(), 4e-6);
  EXPECT_THROW(JitterModel::gaussian(-1.0).validate(), std::invalid_argument);
  EXPECT_THROW(JitterModel::uniform_grid(1e-3, 0.0).validate(), std::invalid_argument);
}

TEST(Drift, LeaderMeansNoDrift) {
  const TopologySpec t = leader_loop(0.7);
  const GraphQuantities gq = build_graph_quantities(t);
  const VectorXd w = VectorXd::Constant(t.edge_count(), 1e-5);
  EXPECT_EQ(drift_rate(t, gq, default_params(0.5), w), 0.0);
}

TEST(Drift, SymmetricPairHandValue) {
  const TopologySpec t = symmetric_pair();
  const GraphQuantities gq = build_graph_quantities(t);
  const double b = 7e-6;
  const ProtocolParams q = default_params(0.5);
  EXPECT_NEAR(drift_rate(t, gq, q, Eigen::Vector2d(b, 0.0)), 0.1 * b / 2.0, 1e-20);
  EXPECT_EQ(drift_rate(t, gq, q, Eigen::Vector2d::Zero()), 0.0);
}

TEST(SteadyState, ClientServerBiasPassesThrough) {
  const TopologySpec t = client_server(0.7);
  const GraphQuantities gq = build_graph_quantities(t);
  const VectorXd dx = steady_state_offsets(t, gq, default_params(1.0), VectorXd::Constant(1, 10e-6));
  // Node 2 nulls D21 = x1 - x2 + w, so it settles 10 us ahead of the leader.
  EXPECT_NEAR(dx(1) - dx(0), 10e-6, 1e-15);
  EXPECT_NEAR(steady_state_offsets(t, gq, default_params(1.0), VectorXd::Zero(1)).norm(), 0.0, 1e-18);
}

TEST(SteadyState, Errors) {
  const TopologySpec t = symmetric_pair();
  EXPECT_THROW(steady_state_offsets(t, build_graph_quantities(t), default_params(0.5), VectorXd::Zero(2)),
               std::domain_error);
  const TopologySpec loop = leader_loop();
  EXPECT_THROW(steady_state_offsets(loop, build_graph_quantities(loop), default_params(1.0),
                                    VectorXd::Zero(4)),
               std::domain_error);
}

TEST(SteadyState, MatchesNoiselessSimulation) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 3; ++trial) {
    fixtures::StableInstance s;
    do {
      s = fixtures::random_stable_instance(rng, 5, 5, 0.9);
    } while (!s.gq.leader);
    Scenario sc;
    sc.topo = s.topo;
    sc.params = s.params;
    for (const Edge& e : s.topo.edges) {
      sc.noise.edge_jitter[{e.from, e.to}] = JitterModel::constant(fixtures::uniform(rng, -2e-5, 2e-5));
    }
    sc.steps = static_cast<long>(std::log(1e-14) / std::log(s.rho)) + 100;
    sc.warmup = 0.5;
    const SimTrace tr = run(sc);
    const VectorXd dx = steady_state_offsets(s.topo, s.gq, s.params, [&] {
      VectorXd w(s.topo.edge_count());
      for (int k = 0; k < s.topo.edge_count(); ++k) {
        w(k) = sc.noise.jitter_for(s.topo.edges[k].from, s.topo.edges[k].to).mean();
      }
      return w;
    }());
    const int ref = tr.reference;
    for (int i = 0; i < 5; ++i) {
      EXPECT_NEAR(tr.offset_us(sc.steps - 1, i) * 1e-6, dx(i) - dx(ref), 1e-9);
    }
  }
}

TEST(H2, ZeroInputGivesZeroNorm) {
  TopologySpec t = client_server(0.7);
  t.edges[0].noise_gain = 0.0;
  t.wander_gain = VectorXd::Zero(2);
  const H2Result h = h2_norm(build_matrices(t, default_params(1.0), build_graph_quantities(t)));
  EXPECT_EQ(h.f, 0.0);
  EXPECT_THROW(h2_gradient(t, default_params(1.0)), std::domain_error);
}

TEST(H2, UnstablePlantThrows) {
  const TopologySpec t = leader_loop();
  EXPECT_THROW(h2_norm(build_matrices(t, default_params(1.0), build_graph_quantities(t))),
               std::domain_error);
}

TEST(H2, GramianFormsAgree) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const fixtures::StableInstance s = fixtures::random_stable_instance(rng, 3, 7, 0.98);
    const H2Result h = h2_norm(build_matrices(s.topo, s.params, s.gq));
    EXPECT_NEAR(h.f, h.f_y, 1e-9 * h.f);
    EXPECT_NEAR(h.rho, s.rho, 1e-9);
  }
}

TEST(H2, ClientWanderMonteCarlo) {
  TopologySpec t = client_server(0.7);
  t.wander_gain = Eigen::Vector2d(0.0, 1.0);
  t.edges[0].noise_gain = 0.0;
  const ProtocolParams q = default_params(1.0);
  const double f = h2_norm(build_matrices(t, q, build_graph_quantities(t))).f;
  Scenario sc;
  sc.topo = t;
  sc.params = q;
  sc.noise.wander_sigma = 1e-7;
  sc.noise.seed = 45;
  sc.steps = 1000000;
  sc.warmup = 0.01;
  sc.record_stride = 1000;
  const SimTrace tr = run(sc);
  EXPECT_NEAR(tr.metrics.sqrt_sn_us * 1e-6, f * 1e-7, 0.02 * f * 1e-7);
}

TEST(H2, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 5; ++trial) {
    const fixtures::StableInstance s = fixtures::random_stable_instance(rng, 3, 6, 0.97);
    const H2Gradient g = h2_gradient(s.topo, s.params);
    const double h = 1e-6;
    auto fd = [&](double ProtocolParams::*field) {
      ProtocolParams plus = s.params;
      ProtocolParams minus = s.params;
      plus.*field += h;
      minus.*field -= h;
      return (h2_value(s.topo, plus) - h2_value(s.topo, minus)) / (2.0 * h);
    };
    auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-5 * std::max(std::abs(a), std::abs(b)) + 1e-9;
    };
    EXPECT_TRUE(close(g.d_kappa1, fd(&ProtocolParams::kappa1))) << g.d_kappa1;
    EXPECT_TRUE(close(g.d_kappa2, fd(&ProtocolParams::kappa2))) << g.d_kappa2;
    EXPECT_TRUE(close(g.d_p, fd(&ProtocolParams::p))) << g.d_p;
  }
}

TEST(H2, EdgeWeightPartialsByDifferences) {
  const TopologySpec t = leader_loop(0.7);
  const ProtocolParams q = default_params(0.5);
  const H2Gradient g = h2_gradient(t, q, true);
  ASSERT_EQ(g.d_alpha.size(), t.edges.size());
  TopologySpec plus = t;
  plus.edges[2].weight += 1e-5;
  TopologySpec minus = t;
  minus.edges[2].weight -= 1e-5;
  EXPECT_NEAR(g.d_alpha[2], (h2_value(plus, q) - h2_value(minus, q)) / 2e-5, 1e-5 * std::abs(g.d_alpha[2]));
}
