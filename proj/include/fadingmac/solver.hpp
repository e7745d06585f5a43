#ifndef FADINGMAC_SOLVER_HPP
#define FADINGMAC_SOLVER_HPP

// Gradient projection with approximate projection,
//   R^{j+1} = P~(R^j + alpha_j g^j),  g^j = subgradient of u at R^j,
// plus the greedy (per-state utility maximizing) benchmark oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "fadingmac/capacity_region.hpp"
#include "fadingmac/errors.hpp"
#include "fadingmac/utility.hpp"

namespace fadingmac {

struct StepsizeRule {
  enum class Kind { constant, diminishing };
  Kind kind = Kind::constant;
  double alpha0 = 1.0;

  /// Step for iteration j (0-based); diminishing uses alpha0 / sqrt(j + 1).
  double at(std::size_t j) const {
    return kind == Kind::constant ? alpha0 : alpha0 / std::sqrt(static_cast<double>(j) + 1.0);
  }
};

struct SolveReport {
  RateVector best_iterate;
  double best_value = 0.0;
  std::size_t best_index = 0;  // position of the best iterate in the visited sequence
  std::size_t iterations = 0;
  std::vector<RateVector> trail;  // filled only on request
};

inline RateVector gp_step(const Polymatroid& region, const UtilityModel& u, const RateVector& r, double alpha) {
  if (!(alpha >= 0.0)) throw domain_error("gp_step: stepsize must be >= 0");
  return approximate_project(region, r + alpha * subgradient(u, r));
}

/// Polymatroid greedy: users by decreasing weight (ties by index), chain vertex
/// for that order. Maximizes w'R over the region for w >= 0.
inline RateVector linear_greedy(const Polymatroid& region, const Eigen::VectorXd& weights) {
  if (static_cast<std::size_t>(weights.size()) != region.users())
    throw domain_error("linear_greedy: weight vector length does not match user count");
  if ((weights.array() < 0.0).any()) throw domain_error("linear_greedy: weights must be >= 0");
  std::vector<std::size_t> order(region.users());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return weights[static_cast<Eigen::Index>(a)] > weights[static_cast<Eigen::Index>(b)];
  });
  return dominant_face_vertex(region, order);
}

enum class OracleProjection { exact, approximate };

struct GreedyOptions {
  double tol = 1e-12;           // required best-value gain per window
  std::size_t window = 200;
  double alpha0 = 1.0;          // diminishing rule alpha0 / sqrt(j + 1)
  std::size_t iteration_cap = 1'000'000;
  /// approximate reproduces gp_step literally, but its fixed point sits O(alpha)
  /// away from a vertex optimum, so it only reaches ~1e-4 after 10^6 steps.
  OracleProjection projection = OracleProjection::exact;
  double dykstra_tol = 1e-12;
};

/// Benchmark maximizer of u over the region. weighted-log: diminishing-step
/// gradient projection from the origin with best-iterate tracking, stopped once
/// the best value gains less than tol over a window. weighted-linear: the
/// closed-form polymatroid greedy vertex.
inline SolveReport greedy_oracle(const Polymatroid& region, const UtilityModel& u, const GreedyOptions& opt = {}) {
  if (u.users() != region.users()) throw domain_error("greedy_oracle: utility and region disagree on user count");
  if (!(opt.tol > 0.0)) throw domain_error("greedy_oracle: tol must be > 0");
  SolveReport rep;
  if (u.family() == UtilityFamily::weighted_linear) {
    rep.best_iterate = linear_greedy(region, u.weights());
    rep.best_value = value(u, rep.best_iterate);
    return rep;
  }
  const StepsizeRule rule{StepsizeRule::Kind::diminishing, opt.alpha0};
  RateVector r = RateVector::Zero(static_cast<Eigen::Index>(region.users()));
  rep.best_iterate = r;
  rep.best_value = value(u, r);
  double window_start_value = rep.best_value;
  for (std::size_t j = 0; j < opt.iteration_cap; ++j) {
    if (opt.projection == OracleProjection::exact)
      r = exact_project_oracle(region, r + rule.at(j) * subgradient(u, r), opt.dykstra_tol);
    else
      r = gp_step(region, u, r, rule.at(j));
    rep.iterations = j + 1;
    const double v = value(u, r);
    if (v > rep.best_value) {
      rep.best_value = v;
      rep.best_iterate = r;
      rep.best_index = j + 1;
    }
    if (rep.iterations % opt.window == 0) {
      if (rep.best_value - window_start_value < opt.tol) return rep;
      window_start_value = rep.best_value;
    }
  }
  throw nonconvergence_error("greedy_oracle: iteration cap exceeded");
}

/// Exactly k constant-step iterations from P~(r0); the best iterate is the
/// earliest argmax of u over the k + 1 visited points.
inline SolveReport nb_block(const Polymatroid& region, const UtilityModel& u, const RateVector& r0, double alpha,
                            std::size_t k, bool keep_trail = false) {
  if (!(alpha > 0.0)) throw domain_error("nb_block: stepsize must be > 0");
  SolveReport rep;
  RateVector r = approximate_project(region, r0);
  rep.best_iterate = r;
  rep.best_value = value(u, r);
  if (keep_trail) rep.trail.push_back(r);
  for (std::size_t j = 0; j < k; ++j) {
    r = gp_step(region, u, r, alpha);
    const double v = value(u, r);
    if (v > rep.best_value) {
      rep.best_value = v;
      rep.best_iterate = r;
      rep.best_index = j + 1;
    }
    if (keep_trail) rep.trail.push_back(r);
  }
  rep.iterations = k;
  return rep;
}

}  // namespace fadingmac

#endif  // FADINGMAC_SOLVER_HPP
