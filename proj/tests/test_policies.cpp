#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "fadingmac/policies.hpp"

using namespace fadingmac;

namespace {

double eq_lhs(double c) { return std::pow(c * c - 1.0, 8) / (256.0 * std::pow(c, 4)); }

ChannelTrace s1_trace(std::size_t horizon, std::uint64_t seed, double vhat = 1e-4) {
  FadingConfig cfg;
  cfg.users = 2;
  cfg.h_min = 0.5;
  cfg.h_max = 2.0;
  cfg.v_hat = {vhat, vhat};
  cfg.horizon = horizon;
  cfg.seed = seed;
  return generate_trace(cfg, PowerProfile({1.0, 1.0}, 1.0));
}

UtilityModel s1_utility() {
  return UtilityModel(UtilityFamily::weighted_log, Eigen::VectorXd::Ones(2),
                      certified_box(PowerProfile({1.0, 1.0}, 1.0), 2.0));
}

}  // namespace

TEST(WorstCaseParams, FrozenExample) {
  const auto p = worst_case_params(0.5, 1.0, 1e-4);
  EXPECT_NEAR(p.w_prime, 0.014242135623730950, 1e-15);
  EXPECT_EQ(p.k, 42u);
  EXPECT_NEAR(p.alpha, 0.11751141985274507, 1e-14);
  EXPECT_NEAR(p.theta, 0.61079906924048973, 1e-14);
  EXPECT_NEAR(p.bound(), 2 * 0.61079906924048973, 1e-14);
  EXPECT_FALSE(p.k_clamped);
}

TEST(WorstCaseParams, ScenarioS1Frozen) {
  const auto p = worst_case_params(0.20830299670361796, std::sqrt(2.0), 1e-4);
  EXPECT_NEAR(p.w_prime, 0.026156119658021216, 1e-15);
  EXPECT_EQ(p.k, 64u);
  EXPECT_NEAR(p.alpha, 0.10446658035996225, 1e-14);
  EXPECT_NEAR(p.theta, 1.6894969895003797, 1e-13);
}

TEST(WorstCaseParams, MonotoneAndGuards) {
  const auto a = worst_case_params(0.5, 1.0, 1e-4);
  const auto b = worst_case_params(0.5, 1.0, 0.5e-4);
  EXPECT_LT(b.theta, a.theta);
  EXPECT_GE(b.k, a.k);
  const auto fast = worst_case_params(0.5, 1.0, 100.0);
  EXPECT_EQ(fast.k, 1u);
  EXPECT_TRUE(fast.k_clamped);
  EXPECT_THROW(worst_case_params(0.0, 1.0, 1e-4), domain_error);
  EXPECT_THROW(worst_case_params(0.5, 1.0, -1.0), domain_error);
}

TEST(SolveC, FrozenRootsAndResidual) {
  EXPECT_EQ(solve_c(0.0), 1.0);
  const std::pair<double, double> cases[] = {{1e-8, 1.0998868015897883},
                                             {std::ldexp(1.0, -8), 1.4902161200999536},
                                             {0.1, 1.7229790205162350},
                                             {1e-4, 1.3133139256530041}};
  for (auto [w, c_ref] : cases) {
    const double c = solve_c(w);
    EXPECT_NEAR(c, c_ref, 1e-13) << w;
    EXPECT_LE(std::abs(eq_lhs(c) - w), 1e-10);
    EXPECT_GE(c, 1.0);
  }
  EXPECT_THROW(solve_c(-1e-3), domain_error);
}

TEST(SolveC, Monotone) {
  double prev = solve_c(0.0);
  for (double w = 1e-10; w < 100.0; w *= 3.0) {
    const double c = solve_c(w);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(AvgCaseParams, FrozenExample) {
  const auto p = avg_case_params(0.5, 1.0, 1e-4, 1e-4);
  EXPECT_NEAR(p.c, 1.3133139256530041, 1e-13);
  EXPECT_NEAR(p.gamma, 0.22087219443687890, 1e-13);
  EXPECT_EQ(p.k, 2208u);
  EXPECT_NEAR(p.alpha, 0.024392263137681220, 1e-14);
  EXPECT_NEAR(p.bound(), 1.1063829288891242, 1e-12);
}

TEST(AvgCaseParams, ScenarioS1Frozen) {
  const auto p = avg_case_params(0.20830299670361796, std::sqrt(2.0), 5e-5, 1e-4);
  EXPECT_NEAR(p.gamma, 0.46448924261568280, 1e-13);
  EXPECT_EQ(p.k, 9289u);
  EXPECT_NEAR(p.alpha, 0.022470712484854804, 1e-14);
  EXPECT_NEAR(p.bound(), 2.7047928722253111, 1e-12);
}

TEST(AvgCaseParams, GuardsAndMonotone) {
  EXPECT_THROW(avg_case_params(0.5, 1.0, 2e-4, 1e-4), domain_error);
  const auto a = avg_case_params(0.5, 1.0, 1e-4, 1e-4);
  const auto b = avg_case_params(0.5, 1.0, 0.5e-4, 1e-4);
  EXPECT_LT(b.gamma, a.gamma);
  EXPECT_LT(b.bound(), a.bound());
  const auto c1 = avg_case_params(0.5, 1.0, 1e-4, 0.0 + 1e-4);
  EXPECT_GE(c1.c, 1.0);
}

TEST(RenewalSchedule, Examples) {
  const auto s = build_renewal_schedule({0.3, 0.5, 0.4, 0.1, 0.3}, 0.7);
  ASSERT_GE(s.times.size(), 2u);
  EXPECT_EQ(s.times[0], 0u);
  EXPECT_EQ(s.times[1], 2u);
  EXPECT_EQ(s.times[2], 5u);
  EXPECT_NEAR(s.sums[1], 0.8, 1e-15);

  const auto unit = build_renewal_schedule(std::vector<double>(10, 0.25), 0.25);
  for (std::size_t i = 0; i < unit.times.size(); ++i) EXPECT_EQ(unit.times[i], i);

  EXPECT_EQ(build_renewal_schedule(std::vector<double>(10, 0.0), 0.1).times.size(), 1u);
  EXPECT_THROW(build_renewal_schedule({0.1}, 0.0), domain_error);
}

TEST(RenewalRatio, DeterministicSpeed) {
  PolicyRun run;
  run.allocated.resize(1001);
  for (std::size_t t = 10; t <= 1000; t += 10) run.renewal_times.push_back(t);
  EXPECT_DOUBLE_EQ(renewal_ratio(run, 10), 1.0);
  run.renewal_times.clear();
  EXPECT_THROW(renewal_ratio(run, 10), domain_error);
}

TEST(ApproximatePolicy, StructureAndAccounting) {
  const auto trace = s1_trace(500, 3, 5e-3);
  const auto u = s1_utility();
  WorstCaseParams p = worst_case_params(constants(u).growth(), constants(u).B, 5e-3);
  const auto run = run_approximate_policy(trace, u, p);
  ASSERT_EQ(run.slots(), 500u);
  EXPECT_EQ(run.block_index[0], -1);
  EXPECT_EQ(run.allocated[0], *run.greedy_ref[0]);
  EXPECT_LE(run.gradient_iterations, 500u + p.k);
  EXPECT_EQ(run.measurements, run.block_starts.size());
  for (std::size_t n = 1; n < run.slots(); ++n) {
    const auto b = static_cast<std::size_t>(run.block_index[n]);
    EXPECT_EQ(b, (n - 1) / p.k);
    EXPECT_TRUE(is_feasible(trace.region(b * p.k), run.allocated[n]));
    EXPECT_LE(run.track_err[n], p.bound() + 1e-3);
  }
}

TEST(ApproximatePolicy, KOneStepsEverySlot) {
  const auto trace = s1_trace(50, 4, 1e-2);
  const auto u = s1_utility();
  WorstCaseParams p = worst_case_params(constants(u).growth(), constants(u).B, 1e-2);
  p.k = 1;
  const auto run = run_approximate_policy(trace, u, p);
  EXPECT_EQ(run.gradient_iterations, 49u);
  for (std::size_t n = 1; n < 50; ++n) EXPECT_EQ(run.block_index[n], static_cast<long long>(n - 1));
}

TEST(ApproximatePolicy, StaticChannelConverges) {
  FadingConfig cfg;
  cfg.users = 2;
  cfg.h_min = 0.5;
  cfg.h_max = 2.0;
  cfg.v_hat = {0.0, 0.0};
  cfg.horizon = 400;
  cfg.initial = std::vector<double>{1.7, 0.6};
  const auto trace = generate_trace(cfg, PowerProfile({1.0, 1.0}, 1.0));
  const auto u = s1_utility();
  const auto p = worst_case_params(constants(u).growth(), constants(u).B, 1e-4);
  const auto run = run_approximate_policy(trace, u, p);
  for (std::size_t n = p.k + 1; n < run.slots(); ++n) EXPECT_LE(run.track_err[n], p.theta);
}

TEST(ImprovedPolicy, StaticChannelNeverRenews) {
  FadingConfig cfg;
  cfg.users = 2;
  cfg.h_min = 0.5;
  cfg.h_max = 2.0;
  cfg.v_hat = {0.0, 0.0};
  cfg.horizon = 100;
  const auto trace = generate_trace(cfg, PowerProfile({1.0, 1.0}, 1.0));
  const auto u = s1_utility();
  AvgCaseParams p = avg_case_params(constants(u).growth(), constants(u).B, 5e-5, 1e-4);
  p.k = 50;
  const auto run = run_improved_policy(trace, u, p);
  EXPECT_TRUE(run.renewal_times.empty());
  EXPECT_FALSE(run.warnings.empty());
  EXPECT_EQ(run.measurements, 100u);
  for (std::size_t n = 0; n < run.slots(); ++n) EXPECT_LT(run.track_err[n], 1e-9);
  EXPECT_THROW(renewal_ratio(run, p.k), domain_error);
}

TEST(ImprovedPolicy, BlocksStartAtRenewals) {
  const auto trace = s1_trace(3000, 6, 2e-3);
  const auto u = s1_utility();
  const auto p = avg_case_params(constants(u).growth(), constants(u).B, 1e-3, 2e-3);
  const auto run = run_improved_policy(trace, u, p);
  const auto sched = build_renewal_schedule(trace.w_series, p.gamma);
  ASSERT_GE(run.renewal_times.size(), 2u);
  for (std::size_t i = 1; i < sched.times.size(); ++i) EXPECT_EQ(run.renewal_times[i - 1], sched.times[i]);
  for (std::size_t n = 1; n < run.slots(); ++n) {
    const auto b = static_cast<std::size_t>(run.block_index[n]);
    EXPECT_LT(run.block_starts[b], n);
    if (b + 1 < run.block_starts.size()) {
      EXPECT_GE(run.block_starts[b + 1], n);
    }
    EXPECT_LE(run.track_err[n], p.bound() + 1e-3);
  }
  for (const auto& c : run.checks) {
    EXPECT_TRUE(c.start_ok);
    EXPECT_TRUE(c.rate_ok);
    EXPECT_TRUE(c.drift_ok);
  }
}

TEST(PolicyCsv, HeaderAndRows) {
  const auto trace = s1_trace(30, 2, 1e-2);
  const auto u = s1_utility();
  const auto p = worst_case_params(constants(u).growth(), constants(u).B, 1e-2);
  PolicyOptions opt;
  opt.cadence = OracleCadence::block_boundaries;
  const auto run = run_approximate_policy(trace, u, p, opt);
  std::ostringstream os;
  write_policy_csv(os, run, trace);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "slot,block,tau,h_1,h_2,r_1,r_2,rbar_1,rbar_2,track_err,bound");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 30u);
  EXPECT_NE(os.str().find("nan"), std::string::npos);
}
