#include <gtest/gtest.h>

#include "skewless/optimize.hpp"
#include "skewless/scenarios.hpp"

using namespace skewless;

namespace {

void expect_feasible_monotone(const OptimizeResult& r, double rho_star) {
  ASSERT_FALSE(r.log.empty());
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    EXPECT_LE(r.log[i].rho, rho_star);
    EXPECT_TRUE(parameter_condition_violations(r.log[i].params).empty());
    if (i > 0) EXPECT_LE(r.log[i].f, r.log[i - 1].f);
  }
}

}  // namespace

TEST(Optimize, ImprovesOnDefaultsForJitterPreset) {
  const TopologySpec t = experiment6_topology("jitter");
  const ProtocolParams init = default_params(0.5);
  OptimizeOptions o;
  o.max_iter = 60;
  const OptimizeResult r = optimize_params(t, init, o);
  expect_feasible_monotone(r, o.rho_star);
  EXPECT_LE(r.f, h2_value(t, init));
}

TEST(Optimize, RestartAtOptimumIsNoOp) {
  const TopologySpec t = client_server(0.7);
  OptimizeOptions o;
  o.max_iter = 300;
  const OptimizeResult first = optimize_params(t, default_params(1.0), o);
  const OptimizeResult again = optimize_params(t, first.params, o);
  EXPECT_NEAR(again.f, first.f, 1e-9);
  EXPECT_NEAR(again.params.kappa1, first.params.kappa1, 1e-6);
  EXPECT_NEAR(again.params.p, first.params.p, 1e-6);
}

TEST(Optimize, RejectsConditionViolations) {
  ProtocolParams bad = default_params(1.0);
  bad.kappa2 = 1.2;
  EXPECT_THROW(optimize_params(client_server(), bad), std::invalid_argument);
}

TEST(Optimize, NoStableStartThrows) {
  // Node 3 is cut off, so no gain scaling can synchronize.
  TopologySpec apart;
  apart.n = 3;
  apart.edges = {{1, 0, 0.5, 1.0}};
  EXPECT_THROW(optimize_params(apart, default_params(1.0)), std::runtime_error);
}
