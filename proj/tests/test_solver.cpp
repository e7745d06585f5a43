#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fadingmac/channel.hpp"
#include "fadingmac/solver.hpp"

using namespace fadingmac;

namespace {

GaussianMacRegion region2(double h1, double h2) {
  return GaussianMacRegion(PowerProfile({1.0, 1.0}, 1.0), ChannelState({h1, h2}));
}

UtilityModel log2(double w1, double w2) {
  Eigen::VectorXd w(2);
  w << w1, w2;
  return UtilityModel(UtilityFamily::weighted_log, w, Eigen::VectorXd::Ones(2));
}

// Two-user log optimum: on the sum face (1 + r1)/w1 = (1 + r2)/w2, clipped to the face's ends.
RateVector closed_form_log2(const Polymatroid& r, double w1, double w2) {
  const double f1 = r.rank(SubsetId{1}), f2 = r.rank(SubsetId{2}), f12 = r.rank(SubsetId{3});
  const double r1 = std::clamp(w1 * (2.0 + f12) / (w1 + w2) - 1.0, f12 - f2, f1);
  RateVector out(2);
  out << r1, f12 - r1;
  return out;
}

}  // namespace

TEST(StepsizeRule, Values) {
  const StepsizeRule c{StepsizeRule::Kind::constant, 0.3};
  EXPECT_EQ(c.at(0), 0.3);
  EXPECT_EQ(c.at(99), 0.3);
  const StepsizeRule d{StepsizeRule::Kind::diminishing, 1.0};
  EXPECT_DOUBLE_EQ(d.at(3), 0.5);
}

TEST(GpStep, FeasibleAndZeroStepIsProjection) {
  const auto r = region2(1.0, 1.0);
  const auto u = log2(1.0, 1.0);
  RateVector x(2);
  x << 0.5, 0.5;
  EXPECT_TRUE(is_feasible(r, gp_step(r, u, x, 0.7)));
  EXPECT_EQ(gp_step(r, u, x, 0.0), approximate_project(r, x));
  EXPECT_THROW(gp_step(r, u, x, -1.0), domain_error);
}

TEST(LinearGreedy, MatchesVertexEnumeration) {
  std::mt19937_64 rng(4);
  for (std::size_t m : {2u, 3u, 4u}) {
    for (int s = 0; s < 10; ++s) {
      std::vector<double> h(m), p(m);
      for (auto& x : h) x = 0.5 + 1.5 * unit_uniform(rng);
      for (auto& x : p) x = 0.5 + 1.5 * unit_uniform(rng);
      const GaussianMacRegion r(PowerProfile(p, 1.0), ChannelState(h));
      Eigen::VectorXd w(static_cast<Eigen::Index>(m));
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = 0.1 + unit_uniform(rng);
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      double best = -1.0;
      do best = std::max(best, w.dot(dominant_face_vertex(r, order)));
      while (std::next_permutation(order.begin(), order.end()));
      EXPECT_NEAR(w.dot(linear_greedy(r, w)), best, 1e-12);
    }
  }
}

TEST(GreedyOracle, LogMatchesClosedForm) {
  std::mt19937_64 rng(5);
  for (int s = 0; s < 20; ++s) {
    const double h1 = 0.5 + 1.5 * unit_uniform(rng), h2 = 0.5 + 1.5 * unit_uniform(rng);
    const double w1 = 0.2 + 2.0 * unit_uniform(rng), w2 = 0.2 + 2.0 * unit_uniform(rng);
    const auto r = region2(h1, h2);
    const auto rep = greedy_oracle(r, log2(w1, w2));
    EXPECT_LT((rep.best_iterate - closed_form_log2(r, w1, w2)).norm(), 1e-6) << "state " << s;
    EXPECT_TRUE(is_feasible(r, rep.best_iterate));
  }
}

TEST(GreedyOracle, ApproximateProjectionVariantIsCloseButSlower) {
  const auto r = region2(1.2, 0.8);
  GreedyOptions opt;
  opt.projection = OracleProjection::approximate;
  opt.iteration_cap = 20000;
  opt.tol = 1e-6;
  const auto rep = greedy_oracle(r, log2(1.0, 1.0), opt);
  EXPECT_LT((rep.best_iterate - closed_form_log2(r, 1.0, 1.0)).norm(), 1e-2);
}

TEST(GreedyOracle, IterationCapThrows) {
  GreedyOptions opt;
  opt.iteration_cap = 5;
  opt.window = 1000;
  EXPECT_THROW(greedy_oracle(region2(1.0, 1.0), log2(1.0, 1.0), opt), nonconvergence_error);
}

TEST(NbBlock, ZeroIterationsReturnsProjectedStart) {
  const auto r = region2(1.0, 1.0);
  RateVector x(2);
  x << 0.5, 0.5;
  const auto rep = nb_block(r, log2(1.0, 1.0), x, 0.1, 0, true);
  EXPECT_EQ(rep.best_iterate, approximate_project(r, x));
  EXPECT_EQ(rep.best_index, 0u);
  EXPECT_EQ(rep.trail.size(), 1u);
}

TEST(NbBlock, BestIsEarliestArgmaxOfTrail) {
  const auto r = region2(1.5, 0.7);
  const auto u = log2(2.0, 1.0);
  const auto rep = nb_block(r, u, RateVector::Zero(2), 0.05, 40, true);
  ASSERT_EQ(rep.trail.size(), 41u);
  std::size_t arg = 0;
  for (std::size_t j = 1; j < rep.trail.size(); ++j)
    if (value(u, rep.trail[j]) > value(u, rep.trail[arg])) arg = j;
  EXPECT_EQ(rep.best_index, arg);
  EXPECT_EQ(rep.best_iterate, rep.trail[arg]);
  for (const auto& x : rep.trail) EXPECT_TRUE(is_feasible(r, x));
}

TEST(NbBlock, ConstantStepReachesNeighborhood) {
  // u(best) >= u* - (alpha B^2 + eps)/2 once k >= d^2/(alpha eps).
  const auto r = region2(1.0, 1.0);
  const auto u = log2(1.0, 1.0);
  const double alpha = 0.01, B2 = 2.0, eps = alpha * B2;
  const RateVector star = closed_form_log2(r, 1.0, 1.0);
  const double d2 = star.squaredNorm();
  const auto k = static_cast<std::size_t>(std::ceil(d2 / (alpha * eps)));
  const auto rep = nb_block(r, u, RateVector::Zero(2), alpha, k);
  EXPECT_GE(rep.best_value, value(u, star) - 0.5 * (alpha * B2 + eps));
}
