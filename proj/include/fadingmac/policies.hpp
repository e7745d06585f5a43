#ifndef FADINGMAC_POLICIES_HPP
#define FADINGMAC_POLICIES_HPP

// Low-complexity rate allocation over a fading trace.
//
// approximate policy: the channel is measured every k slots; at slot kt the
// region is frozen, the previously served rate is re-projected onto it and k
// constant-step gradient projection iterations are run. The best iterate is
// served for slots kt+1 .. k(t+1).
//
// improved policy: the channel is measured every slot and the same k-step block
// fires at renewal times T_i, where the running sum of W_n since the last
// renewal first reaches gamma.
//
// Both runs compare against the greedy oracle and record the intermediate
// inequalities used in the tracking proofs as runtime checks.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fadingmac/capacity_region.hpp"
#include "fadingmac/channel.hpp"
#include "fadingmac/csv.hpp"
#include "fadingmac/errors.hpp"
#include "fadingmac/solver.hpp"
#include "fadingmac/utility.hpp"

namespace fadingmac {

struct WorstCaseParams {
  std::size_t k = 1;
  double alpha = 0.0;
  double theta = 0.0;
  double w_prime = 0.0;
  double w_hat = 0.0;
  bool k_clamped = false;  // floor formula gave 0; bound not guaranteed
  /// k w' / theta; the induction step needs this <= 1.
  double block_drift_ratio = 0.0;

  double bound() const { return 2.0 * theta; }
};

/// k = floor((2B/(A w'))^{2/3}), alpha = (16A/B^2)^{1/3} w'^{2/3},
/// theta = (2B/A)^{2/3} w'^{1/3}, w' = sqrt(w_hat) (sqrt(w_hat) + sqrt(B/A)).
inline WorstCaseParams worst_case_params(double A, double B, double w_hat) {
  if (!(A > 0.0) || !(B > 0.0) || !(w_hat > 0.0) || !std::isfinite(A) || !std::isfinite(B) || !std::isfinite(w_hat))
    throw domain_error("worst_case_params: A, B and w_hat must be finite and > 0");
  WorstCaseParams p;
  p.w_hat = w_hat;
  p.w_prime = std::sqrt(w_hat) * (std::sqrt(w_hat) + std::sqrt(B / A));
  const double k_real = std::floor(std::cbrt(std::pow(2.0 * B / (A * p.w_prime), 2.0)));
  p.k_clamped = k_real < 1.0;
  p.k = p.k_clamped ? 1 : static_cast<std::size_t>(k_real);
  p.alpha = std::cbrt(16.0 * A / (B * B)) * std::cbrt(p.w_prime * p.w_prime);
  p.theta = std::cbrt(std::pow(2.0 * B / A, 2.0)) * std::cbrt(p.w_prime);
  p.block_drift_ratio = static_cast<double>(p.k) * p.w_prime / p.theta;
  return p;
}

/// Root c >= 1 of (c^2 - 1)^8 / (2^8 c^4) = w_hat. The left side is strictly
/// increasing on c >= 1, so bisection on a doubled bracket finds the unique root.
inline double solve_c(double w_hat) {
  if (!(w_hat >= 0.0) || !std::isfinite(w_hat)) throw domain_error("solve_c: w_hat must be finite and >= 0");
  const auto lhs = [](double c) {
    const double q = c * c - 1.0;
    const double q2 = q * q;
    const double q4 = q2 * q2;
    return q4 * q4 / (256.0 * c * c * c * c);
  };
  if (w_hat == 0.0) return 1.0;
  double lo = 1.0;
  double hi = 2.0;
  while (lhs(hi) <= w_hat) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (lhs(mid) < w_hat ? lo : hi) = mid;
  }
  return std::abs(lhs(lo) - w_hat) <= std::abs(lhs(hi) - w_hat) ? lo : hi;
}

struct AvgCaseParams {
  double gamma = 0.0;
  std::size_t k = 1;
  double alpha = 0.0;
  double c = 1.0;
  double w_bar = 0.0;
  double w_hat = 0.0;
  double A = 0.0;
  double B = 0.0;
  bool k_clamped = false;

  double bound() const { return 2.0 * gamma + std::sqrt(gamma * B / A); }
};

/// gamma = c (B/A)^{3/4} w_bar^{1/4}, k = floor(gamma / w_bar), alpha = A gamma^2 / B^2.
inline AvgCaseParams avg_case_params(double A, double B, double w_bar, double w_hat) {
  if (!(A > 0.0) || !(B > 0.0) || !(w_bar > 0.0) || !std::isfinite(A) || !std::isfinite(B) || !std::isfinite(w_bar))
    throw domain_error("avg_case_params: A, B and w_bar must be finite and > 0");
  if (w_bar > w_hat) throw domain_error("avg_case_params: mean speed w_bar exceeds the maximum speed w_hat");
  AvgCaseParams p;
  p.A = A;
  p.B = B;
  p.w_bar = w_bar;
  p.w_hat = w_hat;
  p.c = solve_c(w_hat);
  p.gamma = p.c * std::pow(B / A, 0.75) * std::pow(w_bar, 0.25);
  const double k_real = std::floor(p.gamma / w_bar);
  p.k_clamped = k_real < 1.0;
  p.k = p.k_clamped ? 1 : static_cast<std::size_t>(k_real);
  p.alpha = A * p.gamma * p.gamma / (B * B);
  return p;
}

struct RenewalSchedule {
  std::vector<std::size_t> times;  // T_0 = 0, T_1, ...
  std::vector<double> sums;        // W-sum accumulated at each crossing (entry 0 is 0)
};

/// T_{i+1} = min{ t : sum_{n=T_i}^{t-1} W_n >= gamma }.
inline RenewalSchedule build_renewal_schedule(const std::vector<double>& w_series, double gamma) {
  if (!(gamma > 0.0)) throw domain_error("build_renewal_schedule: gamma must be > 0");
  RenewalSchedule s{{0}, {0.0}};
  double acc = 0.0;
  for (std::size_t n = 0; n < w_series.size(); ++n) {
    acc += w_series[n];
    if (acc >= gamma) {
      s.times.push_back(n + 1);
      s.sums.push_back(acc);
      acc = 0.0;
    }
  }
  return s;
}

enum class PolicyKind { approximate, improved };
enum class OracleCadence { every_slot, block_boundaries };

inline std::string_view to_string(PolicyKind k) { return k == PolicyKind::approximate ? "approximate" : "improved"; }

struct PolicyOptions {
  OracleCadence cadence = OracleCadence::every_slot;
  GreedyOptions greedy;
  double oracle_tol = 1e-3;  // slack granted to the oracle in tracking / Lemma-type checks
  double value_tol = 1e-9;   // slack on the utility-gap check of each block
};

/// Runtime record of the proof steps at one block (or renewal).
struct BlockCheck {
  std::size_t block = 0;
  std::size_t frozen_slot = 0;
  // start-point radius: ||R^0 - Rbar(frozen)|| <= start_bound
  double start_distance = 0.0;
  double start_bound = 0.0;
  bool start_ok = true;
  // constant-step rate: u(best) >= u(Rbar) - (alpha B^2 + eps)/2 when k >= floor(d^2/(alpha eps))
  bool rate_applies = false;
  bool rate_floor_only = false;  // holds only because of the floor
  double best_value = 0.0;
  double rate_floor_value = 0.0;
  bool rate_ok = true;
  // optimal-point drift between consecutive frozen regions
  bool has_drift = false;
  double delta = 0.0;
  double drift = 0.0;
  double drift_bound = 0.0;
  bool drift_ok = true;
};

struct PolicyRun {
  PolicyKind kind = PolicyKind::approximate;
  std::size_t k = 1;
  double alpha = 0.0;
  double epsilon = 0.0;
  double bound = 0.0;

  std::vector<RateVector> allocated;
  std::vector<std::optional<RateVector>> greedy_ref;
  std::vector<double> track_err;  // NaN where no oracle reference was computed
  std::vector<long long> block_index;  // -1 at slot 0
  std::vector<long long> tau;          // -1 at slot 0
  std::vector<std::size_t> block_starts;
  std::vector<std::size_t> renewal_times;  // T_1, T_2, ... within the horizon (improved only)
  std::size_t gradient_iterations = 0;
  std::size_t measurements = 0;
  std::vector<BlockCheck> checks;
  double max_track_err = 0.0;
  double mean_track_err = 0.0;
  double instantaneous_violation_max = 0.0;
  std::vector<std::string> warnings;

  std::size_t slots() const { return allocated.size(); }
};

namespace detail {

class OracleCache {
 public:
  OracleCache(const ChannelTrace& trace, const UtilityModel& u, const GreedyOptions& opt)
      : trace_(trace), u_(u), opt_(opt) {}

  const RateVector& at(std::size_t slot) {
    const ChannelState& s = trace_.states.at(slot);
    if (!last_state_ || !(*last_state_ == s)) {
      last_ = greedy_oracle(trace_.region(slot), u_, opt_).best_iterate;
      last_state_ = s;
    }
    return last_;
  }

 private:
  const ChannelTrace& trace_;
  const UtilityModel& u_;
  GreedyOptions opt_;
  std::optional<ChannelState> last_state_;
  RateVector last_;
};

struct BlockPlan {
  std::vector<std::size_t> starts;  // frozen slots, each < N - 1, ascending, starts[0] = 0
  std::size_t k = 1;
  double alpha = 0.0;
  double epsilon = 0.0;      // accuracy target fed to the rate check
  double start_bound = 0.0;  // radius of R^0 around the frozen greedy point
  double bound = 0.0;        // final tracking bound
};

inline PolicyRun run_blocks(const ChannelTrace& trace, const UtilityModel& u, const BlockPlan& plan,
                            const PolicyOptions& opt) {
  const std::size_t n_slots = trace.slots();
  if (trace.users() != u.users()) throw domain_error("policy: utility and trace disagree on user count");
  const UtilityConstants uc = constants(u);
  const double A = uc.growth();
  const double B = uc.B;

  PolicyRun run;
  run.k = plan.k;
  run.alpha = plan.alpha;
  run.epsilon = plan.epsilon;
  run.bound = plan.bound;
  run.block_starts = plan.starts;
  run.allocated.resize(n_slots);
  run.greedy_ref.resize(n_slots);
  run.track_err.assign(n_slots, std::numeric_limits<double>::quiet_NaN());
  run.block_index.assign(n_slots, -1);
  run.tau.assign(n_slots, -1);

  OracleCache oracle(trace, u, opt.greedy);
  const auto ref = [&](std::size_t slot) -> const RateVector& {
    if (!run.greedy_ref[slot]) run.greedy_ref[slot] = oracle.at(slot);
    return *run.greedy_ref[slot];
  };

  run.allocated[0] = ref(0);
  std::optional<std::size_t> prev_frozen;
  for (std::size_t b = 0; b < plan.starts.size(); ++b) {
    const std::size_t s = plan.starts[b];
    const std::size_t end = (b + 1 < plan.starts.size()) ? plan.starts[b + 1] : n_slots - 1;
    const GaussianMacRegion frozen = trace.region(s);
    const SolveReport rep = nb_block(frozen, u, run.allocated[s], plan.alpha, plan.k);
    run.gradient_iterations += plan.k;
    for (std::size_t n = s + 1; n <= end; ++n) {
      run.allocated[n] = rep.best_iterate;
      run.block_index[n] = static_cast<long long>(b);
      run.tau[n] = static_cast<long long>(rep.best_index);
    }

    BlockCheck c;
    c.block = b;
    c.frozen_slot = s;
    const RateVector& rbar = ref(s);
    const RateVector start = approximate_project(frozen, run.allocated[s]);
    c.start_distance = (start - rbar).norm();
    c.start_bound = plan.start_bound;
    c.start_ok = c.start_distance <= plan.start_bound + opt.oracle_tol;
    const double needed = c.start_distance * c.start_distance / (plan.alpha * plan.epsilon);
    c.rate_applies = static_cast<double>(plan.k) >= std::floor(needed);
    c.rate_floor_only = c.rate_applies && static_cast<double>(plan.k) < needed;
    c.best_value = rep.best_value;
    c.rate_floor_value = value(u, rbar) - 0.5 * (plan.alpha * B * B + plan.epsilon);
    if (c.rate_applies) c.rate_ok = c.best_value >= c.rate_floor_value - opt.value_tol;
    if (prev_frozen) {
      c.has_drift = true;
      c.delta = region_distance(trace.region(*prev_frozen), frozen);
      c.drift = (ref(*prev_frozen) - rbar).norm();
      c.drift_bound = std::sqrt(c.delta) * (std::sqrt(c.delta) + std::sqrt(B / A));
      c.drift_ok = c.drift <= c.drift_bound + opt.oracle_tol;
    }
    if (c.rate_floor_only)
      run.warnings.push_back("block " + std::to_string(b) + ": iteration-count condition holds only after flooring");
    run.checks.push_back(c);
    prev_frozen = s;
  }

  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t n = 0; n < n_slots; ++n) {
    if (opt.cadence == OracleCadence::every_slot) ref(n);
    if (run.greedy_ref[n]) {
      run.track_err[n] = (run.allocated[n] - *run.greedy_ref[n]).norm();
      run.max_track_err = std::max(run.max_track_err, run.track_err[n]);
      sum += run.track_err[n];
      ++counted;
    }
    run.instantaneous_violation_max =
        std::max(run.instantaneous_violation_max, max_violation(trace.region(n), run.allocated[n]));
  }
  run.mean_track_err = counted ? sum / static_cast<double>(counted) : 0.0;
  return run;
}

}  // namespace detail

inline PolicyRun run_approximate_policy(const ChannelTrace& trace, const UtilityModel& u,
                                        const WorstCaseParams& params, const PolicyOptions& opt = {}) {
  if (trace.slots() == 0) throw domain_error("run_approximate_policy: empty trace");
  if (params.k < 1 || !(params.alpha > 0.0)) throw domain_error("run_approximate_policy: need k >= 1 and alpha > 0");
  const UtilityConstants uc = constants(u);
  detail::BlockPlan plan;
  plan.k = params.k;
  plan.alpha = params.alpha;
  plan.epsilon = params.alpha * uc.B * uc.B;
  plan.start_bound = 2.0 * params.theta;
  plan.bound = params.bound();
  for (std::size_t s = 0; s + 1 < trace.slots(); s += params.k) plan.starts.push_back(s);
  if (plan.starts.empty()) plan.starts.push_back(0);

  PolicyRun run = detail::run_blocks(trace, u, plan, opt);
  run.kind = PolicyKind::approximate;
  run.measurements = plan.starts.size();
  if (trace.slots() == 1) run.gradient_iterations = 0;
  if (params.k_clamped) run.warnings.push_back("k clamped to 1: fading too fast for the worst-case parameter choice");
  if (params.block_drift_ratio > 1.0)
    run.warnings.push_back("k w'/theta = " + csv::fmt17(params.block_drift_ratio) + " exceeds 1");
  return run;
}

inline PolicyRun run_improved_policy(const ChannelTrace& trace, const UtilityModel& u, const AvgCaseParams& params,
                                     const PolicyOptions& opt = {}) {
  if (trace.slots() == 0) throw domain_error("run_improved_policy: empty trace");
  if (params.k < 1 || !(params.alpha > 0.0) || !(params.gamma > 0.0))
    throw domain_error("run_improved_policy: need k >= 1, alpha > 0 and gamma > 0");
  detail::BlockPlan plan;
  plan.k = params.k;
  plan.alpha = params.alpha;
  plan.epsilon = params.A * params.gamma * params.gamma;
  plan.start_bound = params.bound();
  plan.bound = params.bound();
  const RenewalSchedule schedule = build_renewal_schedule(trace.w_series, params.gamma);
  const std::size_t last = trace.slots() - 1;
  for (std::size_t t : schedule.times)
    if (t < last || t == 0) plan.starts.push_back(t);

  PolicyRun run = detail::run_blocks(trace, u, plan, opt);
  run.kind = PolicyKind::improved;
  for (std::size_t i = 1; i < schedule.times.size(); ++i) run.renewal_times.push_back(schedule.times[i]);
  run.measurements = trace.slots();
  if (trace.slots() == 1) run.gradient_iterations = 0;
  if (params.k_clamped) run.warnings.push_back("k clamped to 1: fading too fast for the average-case parameter choice");
  if (run.renewal_times.empty())
    run.warnings.push_back("threshold gamma never reached within the horizon; allocation never updated");
  return run;
}

/// n / (t k) at the final slot n, with t the number of renewals T_i <= n (i >= 1).
inline double renewal_ratio(const PolicyRun& run, std::size_t k) {
  if (run.slots() == 0 || k == 0) throw domain_error("renewal_ratio: empty run or k = 0");
  const std::size_t n = run.slots() - 1;
  std::size_t t = 0;
  for (std::size_t T : run.renewal_times)
    if (T <= n) ++t;
  if (t == 0) throw domain_error("renewal_ratio: no renewal within the horizon; ratio undefined");
  return static_cast<double>(n) / (static_cast<double>(t) * static_cast<double>(k));
}

/// Header `slot,block,tau,h_1..h_M,r_1..r_M,rbar_1..rbar_M,track_err,bound`.
inline void write_policy_csv(std::ostream& os, const PolicyRun& run, const ChannelTrace& trace) {
  const std::size_t m = trace.users();
  os << "slot,block,tau";
  for (std::size_t i = 1; i <= m; ++i) os << ",h_" << i;
  for (std::size_t i = 1; i <= m; ++i) os << ",r_" << i;
  for (std::size_t i = 1; i <= m; ++i) os << ",rbar_" << i;
  os << ",track_err,bound\n";
  for (std::size_t n = 0; n < run.slots(); ++n) {
    os << n << ',' << run.block_index[n] << ',' << run.tau[n];
    for (double h : trace.states[n].gains()) os << ',' << csv::fmt17(h);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) os << ',' << csv::fmt17(run.allocated[n][i]);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i)
      os << ',' << (run.greedy_ref[n] ? csv::fmt17((*run.greedy_ref[n])[i]) : std::string("nan"));
    os << ',' << (std::isnan(run.track_err[n]) ? std::string("nan") : csv::fmt17(run.track_err[n])) << ','
       << csv::fmt17(run.bound) << '\n';
  }
}

}  // namespace fadingmac

#endif  // FADINGMAC_POLICIES_HPP
