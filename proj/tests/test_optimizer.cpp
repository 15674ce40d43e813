#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ehcr/error.hpp"
#include "ehcr/optimizer.hpp"

using namespace ehcr;

namespace {

Policy random_policy(const ActionLayout& layout, double tau, double lambda, std::mt19937_64& rng, bool blind) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // A random overall intensity spreads the draws across the QoS boundary.
  const double scale = std::pow(u(rng), 3.0);
  Policy p = idle_policy(layout, tau, lambda);
  for (double& a : p.alpha) a = blind ? scale * u(rng) : 0.0;
  for (size_t k = 0; k < p.beta1.size(); ++k) {
    p.beta1[k] = blind ? scale * u(rng) : 0.0;
    p.beta2[k] = (1.0 - p.beta1[k]) * (blind ? u(rng) : scale * u(rng) + (1 - scale) * u(rng) * u(rng));
  }
  return p;
}

double best_random(const OperatingPoint& op, bool blind, std::uint64_t seed, int wanted) {
  std::mt19937_64 rng(seed);
  double best = 0.0;
  int found = 0;
  for (int tries = 0; found < wanted && tries < 200 * wanted; ++tries) {
    const Policy p = random_policy(op.chain.layout, op.derived.sensing_time, op.sensing.threshold, rng, blind);
    const auto r = evaluate(op, p);
    if (!r.feasible) continue;
    ++found;
    best = std::max(best, r.mu_s);
  }
  EXPECT_EQ(found, wanted);
  return best;
}

GridSpec small_grid(const SystemParams& p, int count = 8) {
  GridSpec g = default_grid(p);
  g.tau_min = 1e-4;
  g.thresholds = FalseAlarmSpan{0.99, 0.01, count};
  return g;
}

}  // namespace

TEST(Optimizer, ThresholdForFalseAlarmInvertsGammaTail) {
  for (int m : {1, 2, 5, 19}) {
    for (double pf : {0.999, 0.5, 0.001}) {
      const double lambda = threshold_for_false_alarm(m, pf);
      SensingConfig c;
      c.time_bandwidth = m;
      c.threshold = lambda;
      EXPECT_NEAR(false_alarm(c), pf, 1e-12);
    }
  }
  EXPECT_THROW(threshold_for_false_alarm(2, 1.0), DomainError);
}

TEST(Optimizer, SensingTimeGrid) {
  const SystemParams p = testbench_params();
  const GridSpec g = default_grid(p);
  const auto taus = g.sensing_times(p);
  ASSERT_EQ(taus.size(), 19u);
  EXPECT_DOUBLE_EQ(taus.front(), 5e-5);
  EXPECT_NEAR(taus.back(), 9.5e-4, 1e-15);
  GridSpec bad = g;
  bad.tau_min = 1.7e-5;
  EXPECT_THROW(bad.sensing_times(p), DomainError);
}

TEST(Optimizer, FloorAboveSilentRateIsInfeasible) {
  SystemParams p = testbench_params();
  const double silent = make_operating_point(p, 1e-4, 2.0).outage.pu_no_outage_silent;
  p.qos_floor = silent + 1e-4;
  EXPECT_EQ(solve_fixed(p, 1e-4, 2.0, Scheme::probabilistic).status, GridPointStatus::infeasible);
  const auto res = optimize(p, small_grid(p, 3), Scheme::probabilistic, 1);
  EXPECT_FALSE(res.best.has_value());
  for (const auto& rec : res.points) EXPECT_NE(rec.status, GridPointStatus::optimal);
}

TEST(Optimizer, RoundTripThroughChain) {
  for (double rho : {0.1, 0.5, 0.9}) {
    SystemParams p = testbench_params();
    p.pu_activity = rho;
    for (Scheme s : {Scheme::probabilistic, Scheme::sensing_only}) {
      const OperatingPoint op = make_operating_point(p, 1e-4, 3.0);
      const auto fixed = solve_fixed(op, s);
      ASSERT_EQ(fixed.status, GridPointStatus::optimal);
      const auto& sol = *fixed.solution;
      const auto back = evaluate(op, sol.policy);
      EXPECT_NEAR(back.mu_s, sol.report.mu_s, 1e-6) << rho;
      EXPECT_NEAR(back.mu_p, sol.report.mu_p, 1e-6) << rho;
      EXPECT_GE(back.mu_p, p.qos_floor - 1e-6);
      EXPECT_LE((back.pi.pi - sol.substituted.pi).cwiseAbs().maxCoeff(), 1e-6);
      if (s == Scheme::sensing_only) {
        for (double a : sol.policy.alpha) EXPECT_EQ(a, 0.0);
        for (double b : sol.policy.beta1) EXPECT_EQ(b, 0.0);
      }
    }
  }
}

TEST(Optimizer, BeatsRandomFeasiblePolicies) {
  SystemParams p = testbench_params();
  p.pu_activity = 0.5;
  const OperatingPoint op = make_operating_point(p, 1e-4, 3.0);
  const double opt = solve_fixed(op, Scheme::probabilistic).solution->report.mu_s;
  EXPECT_LE(best_random(op, true, 17, 1000), opt + 1e-6);
  const double opt_s = solve_fixed(op, Scheme::sensing_only).solution->report.mu_s;
  EXPECT_LE(best_random(op, false, 18, 1000), opt_s + 1e-6);
}

TEST(Optimizer, UnconstrainedSilentPrimaryAccessesEverywhere) {
  SystemParams p = testbench_params();
  p.pu_activity = 0.0;
  p.qos_floor = 0.0;
  const OperatingPoint op = make_operating_point(p, 1e-4, 3.0);
  const auto fixed = solve_fixed(op, Scheme::probabilistic);
  ASSERT_EQ(fixed.status, GridPointStatus::optimal);
  const auto& sol = *fixed.solution;
  const ActionLayout& lay = op.chain.layout;
  // Every energetically capable level with mass transmits with certainty.
  for (int k = 0; k < lay.alpha_size(); ++k) {
    if (sol.substituted.pi[lay.alpha_begin() + k] > 1e-9) EXPECT_NEAR(sol.policy.alpha[k], 1.0, 1e-9);
  }
  for (int k = 0; k < lay.beta_size(); ++k) {
    if (sol.substituted.pi[lay.beta_begin() + k] > 1e-9) {
      EXPECT_NEAR(sol.policy.beta1[k] + sol.policy.beta2[k], 1.0, 1e-9);
    }
  }
  EXPECT_LE(best_random(op, true, 19, 1000), sol.report.mu_s + 1e-6);
}

TEST(Optimizer, SensingOnlyIsDominated) {
  for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    SystemParams p = testbench_params();
    p.pu_activity = rho;
    const auto grid = small_grid(p, 6);
    const auto a = optimize(p, grid, Scheme::probabilistic, 1);
    const auto b = optimize(p, grid, Scheme::sensing_only, 1);
    ASSERT_TRUE(a.best && b.best);
    EXPECT_GE(a.best->report.mu_s, b.best->report.mu_s - 1e-9) << rho;
    EXPECT_GE(a.best->report.mu_p, p.qos_floor - 1e-6);
  }
}

TEST(Optimizer, SinglePointGridEqualsFixed) {
  const SystemParams p = testbench_params();
  GridSpec g;
  g.tau_min = 4e-4;
  g.thresholds = ExplicitThresholds{{5.0}};
  // A shorter slot leaves tau = 4e-4 as the only grid point.
  SystemParams q = p;
  q.slot = 8e-4;
  q.transmit_energy = p.transmit_energy * 0.8;
  q.qos_floor = 0.5;
  const auto res = optimize(q, g, Scheme::probabilistic, 1);
  ASSERT_EQ(res.points.size(), 1u);
  const auto fixed = solve_fixed(q, 4e-4, 5.0, Scheme::probabilistic);
  ASSERT_TRUE(res.best && fixed.solution);
  EXPECT_EQ(res.best->report.mu_s, fixed.solution->report.mu_s);
  EXPECT_EQ(res.best->policy.beta2, fixed.solution->policy.beta2);
}

TEST(Optimizer, SkipsUnsupportedAndUnreachablePoints) {
  SystemParams p = testbench_params();
  const auto res = optimize(p, [&] {
    GridSpec g = default_grid(p);
    g.thresholds = FalseAlarmSpan{0.9, 0.1, 2};
    return g;
  }(), Scheme::probabilistic, 1);
  EXPECT_EQ(res.points.front().status, GridPointStatus::unsupported_m);

  p.battery_capacity = 9;  // N_t = 9 leaves no room for sensing energy
  const auto none = optimize(p, small_grid(p, 2), Scheme::probabilistic, 1);
  EXPECT_FALSE(none.best.has_value());
  for (const auto& rec : none.points) EXPECT_EQ(rec.status, GridPointStatus::sensing_unreachable);
  EXPECT_THROW(solve_fixed(p, 1e-4, 2.0, Scheme::sensing_only), ConfigError);
}

TEST(Optimizer, ResultIndependentOfThreadsAndOrder) {
  SystemParams p = testbench_params();
  p.pu_activity = 0.6;
  GridSpec g = small_grid(p, 10);
  const auto serial = optimize(p, g, Scheme::probabilistic, 1);
  const auto threaded = optimize(p, g, Scheme::probabilistic, 4);
  ASSERT_TRUE(serial.best && threaded.best);
  EXPECT_EQ(serial.best->report.mu_s, threaded.best->report.mu_s);
  EXPECT_EQ(serial.best->policy.sensing_time, threaded.best->policy.sensing_time);
  EXPECT_EQ(serial.best->policy.threshold, threaded.best->policy.threshold);

  // Same thresholds listed in reverse: the winner must not change.
  std::vector<double> values = g.thresholds_for(2);
  GridSpec fwd = g, rev = g;
  fwd.thresholds = ExplicitThresholds{values};
  std::reverse(values.begin(), values.end());
  rev.thresholds = ExplicitThresholds{values};
  const auto a = optimize(p, fwd, Scheme::probabilistic, 1);
  const auto b = optimize(p, rev, Scheme::probabilistic, 3);
  ASSERT_TRUE(a.best && b.best);
  EXPECT_EQ(a.best->report.mu_s, b.best->report.mu_s);
  EXPECT_EQ(a.best->policy.threshold, b.best->policy.threshold);
  EXPECT_EQ(a.best->policy.sensing_time, b.best->policy.sensing_time);
}

TEST(Optimizer, TieBreakPrefersSmallerThreshold) {
  // Duplicate thresholds produce exact ties; the first by value wins.
  SystemParams p = testbench_params();
  GridSpec g;
  g.tau_min = 1e-4;
  g.thresholds = ExplicitThresholds{{4.0, 4.0}};
  SystemParams q = p;
  q.slot = 2e-4;
  q.transmit_energy = p.transmit_energy * 0.2;
  q.qos_floor = 0.0;
  const auto res = optimize(q, g, Scheme::probabilistic, 1);
  ASSERT_EQ(res.points.size(), 2u);
  EXPECT_EQ(res.points[0].mu_s, res.points[1].mu_s);
  ASSERT_TRUE(res.best.has_value());
  EXPECT_EQ(res.best->policy.threshold, 4.0);
}

TEST(Optimizer, SchemeNames) {
  EXPECT_EQ(parse_scheme("sensing_only"), Scheme::sensing_only);
  EXPECT_STREQ(to_string(Scheme::probabilistic), "probabilistic");
  EXPECT_THROW(parse_scheme("greedy"), ConfigError);
}
