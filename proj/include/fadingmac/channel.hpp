#ifndef FADINGMAC_CHANNEL_HPP
#define FADINGMAC_CHANNEL_HPP

// Bounded-increment fading traces. Each user's gain performs a random walk
// with i.i.d. steps |step| <= vHat_i, reflected at [hMin, hMax]. The realized
// absolute step V_n^i drives the per-slot region-distance bound
//   W_n = sum_i V_n^i P_i / (2 N0).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fadingmac/capacity_region.hpp"
#include "fadingmac/csv.hpp"
#include "fadingmac/errors.hpp"

namespace fadingmac {

/// Uniform double in [0, 1) from the top 53 bits; fixed so traces do not
/// depend on the standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

enum class StepLawKind { uniform, scaled_beta };

/// Law of the signed pre-reflection step. uniform: U(-vHat, vHat).
/// scaled_beta: random sign times vHat * Beta(a, b).
struct StepLaw {
  StepLawKind kind = StepLawKind::uniform;
  double a = 1.0;
  double b = 1.0;

  double sample(std::mt19937_64& rng, double vhat) const {
    if (kind == StepLawKind::uniform) return vhat * (2.0 * unit_uniform(rng) - 1.0);
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    const double beta = (x + y > 0.0) ? x / (x + y) : 0.5;
    const double sign = (rng() >> 63) ? 1.0 : -1.0;
    return sign * vhat * std::min(beta, 1.0);
  }

  /// E|step| before reflection.
  double mean_abs(double vhat) const { return kind == StepLawKind::uniform ? 0.5 * vhat : vhat * a / (a + b); }
};

struct FadingConfig {
  std::size_t users = 1;
  double h_min = 0.0;
  double h_max = 1.0;
  std::vector<double> v_hat;
  StepLaw law;
  std::uint64_t seed = 0;
  std::size_t horizon = 1;
  /// Gains at slot 0; drawn uniformly in [h_min, h_max] when absent.
  std::optional<std::vector<double>> initial;

  void validate() const {
    if (users == 0 || users > kMaxUsers) throw config_error("fading: user count out of range");
    if (!(h_min >= 0.0) || !(h_max > h_min) || !std::isfinite(h_max))
      throw config_error("fading: need 0 <= hMin < hMax");
    if (v_hat.size() != users) throw config_error("fading: vHat needs one entry per user");
    for (double v : v_hat)
      if (!(v >= 0.0) || v > h_max - h_min) throw config_error("fading: each vHat must lie in [0, hMax - hMin]");
    if (horizon < 1) throw config_error("fading: horizon must be >= 1");
    if (law.kind == StepLawKind::scaled_beta && !(law.a > 0.0 && law.b > 0.0))
      throw config_error("fading: beta parameters must be > 0");
    if (initial) {
      if (initial->size() != users) throw config_error("fading: initial gains need one entry per user");
      for (double h : *initial)
        if (!(h >= h_min && h <= h_max)) throw config_error("fading: initial gains must lie in [hMin, hMax]");
    }
  }
};

struct ChannelTrace {
  PowerProfile profile;
  std::vector<ChannelState> states;  // slots 0..N-1
  Eigen::MatrixXd step_speeds;       // (N-1) x M, |H_i(n+1) - H_i(n)|
  std::vector<double> w_series;      // N-1 entries

  std::size_t slots() const { return states.size(); }
  std::size_t users() const { return profile.users(); }
  GaussianMacRegion region(std::size_t slot) const { return GaussianMacRegion(profile, states.at(slot)); }
};

inline double w_from_speeds(const PowerProfile& profile, const Eigen::Ref<const Eigen::RowVectorXd>& speeds) {
  double w = 0.0;
  for (std::size_t i = 0; i < profile.users(); ++i) w += speeds[static_cast<Eigen::Index>(i)] * profile.power(i);
  return w / (2.0 * profile.noise());
}

namespace detail {

/// One reflected step that never leaves [lo, hi] and never moves farther than vhat.
inline double reflected_step(double prev, double step, double lo, double hi, double vhat) {
  double h = prev + step;
  if (h > hi) h = 2.0 * hi - h;
  if (h < lo) h = 2.0 * lo - h;
  h = std::clamp(h, lo, hi);
  while (std::abs(h - prev) > vhat) h = std::nextafter(h, prev);
  return h;
}

inline void fill_speeds(ChannelTrace& trace) {
  const std::size_t n = trace.slots();
  const std::size_t m = trace.users();
  trace.step_speeds.resize(static_cast<Eigen::Index>(n > 0 ? n - 1 : 0), static_cast<Eigen::Index>(m));
  trace.w_series.assign(n > 0 ? n - 1 : 0, 0.0);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t i = 0; i < m; ++i)
      trace.step_speeds(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
          std::abs(trace.states[t + 1].gain(i) - trace.states[t].gain(i));
    trace.w_series[t] = w_from_speeds(trace.profile, trace.step_speeds.row(static_cast<Eigen::Index>(t)));
  }
}

}  // namespace detail

/// Deterministic in (cfg, profile): the RNG is consumed slot by slot, user by user.
inline ChannelTrace generate_trace(const FadingConfig& cfg, const PowerProfile& profile) {
  cfg.validate();
  if (profile.users() != cfg.users) throw config_error("fading: user count differs from power profile");
  std::mt19937_64 rng(cfg.seed);
  ChannelTrace trace{profile, {}, {}, {}};
  trace.states.reserve(cfg.horizon);

  std::vector<double> gains(cfg.users);
  for (std::size_t i = 0; i < cfg.users; ++i)
    gains[i] = cfg.initial ? (*cfg.initial)[i] : cfg.h_min + (cfg.h_max - cfg.h_min) * unit_uniform(rng);
  trace.states.emplace_back(gains);

  for (std::size_t t = 1; t < cfg.horizon; ++t) {
    for (std::size_t i = 0; i < cfg.users; ++i) {
      const double step = cfg.law.sample(rng, cfg.v_hat[i]);
      gains[i] = detail::reflected_step(gains[i], step, cfg.h_min, cfg.h_max, cfg.v_hat[i]);
    }
    trace.states.emplace_back(gains);
  }
  detail::fill_speeds(trace);
  return trace;
}

struct SpeedStats {
  double w_bar = 0.0;        // empirical mean of W_n
  double w_hat_bound = 0.0;  // sum_i vHat_i P_i / (2 N0)
};

inline double max_speed_bound(const FadingConfig& cfg, const PowerProfile& profile) {
  double w = 0.0;
  for (std::size_t i = 0; i < profile.users(); ++i) w += cfg.v_hat.at(i) * profile.power(i);
  return w / (2.0 * profile.noise());
}

/// E[W_n] from the step law, ignoring reflections.
inline double analytic_mean_speed(const FadingConfig& cfg, const PowerProfile& profile) {
  double w = 0.0;
  for (std::size_t i = 0; i < profile.users(); ++i) w += cfg.law.mean_abs(cfg.v_hat.at(i)) * profile.power(i);
  return w / (2.0 * profile.noise());
}

inline SpeedStats speed_stats(const ChannelTrace& trace, const FadingConfig& cfg) {
  SpeedStats s;
  s.w_hat_bound = max_speed_bound(cfg, trace.profile);
  if (!trace.w_series.empty()) {
    double sum = 0.0;
    for (double w : trace.w_series) sum += w;
    s.w_bar = sum / static_cast<double>(trace.w_series.size());
  }
  return s;
}

struct WBoundResult {
  bool ok = true;
  double worst_slack = 0.0;  // max_n (distance_n - W_n); <= 0 when the bound holds
  std::size_t worst_slot = 0;
};

/// Checks region_distance(region[n], region[n+1]) <= W_n + 1e-12 for every n.
inline WBoundResult w_bound_detail(const ChannelTrace& trace, std::span<const GaussianMacRegion> regions) {
  if (regions.size() != trace.slots()) throw domain_error("w_bound_check: one region per slot required");
  WBoundResult res;
  res.worst_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < regions.size(); ++n) {
    const double slack = region_distance(regions[n], regions[n + 1]) - trace.w_series[n];
    if (slack > res.worst_slack) {
      res.worst_slack = slack;
      res.worst_slot = n;
    }
    if (slack > 1e-12) res.ok = false;
  }
  if (regions.size() < 2) res.worst_slack = 0.0;
  return res;
}

inline bool w_bound_check(const ChannelTrace& trace, std::span<const GaussianMacRegion> regions) {
  return w_bound_detail(trace, regions).ok;
}

inline std::vector<GaussianMacRegion> regions_of(const ChannelTrace& trace) {
  std::vector<GaussianMacRegion> regions;
  regions.reserve(trace.slots());
  for (const auto& s : trace.states) regions.emplace_back(trace.profile, s);
  return regions;
}

inline bool w_bound_check(const ChannelTrace& trace) {
  const auto regions = regions_of(trace);
  return w_bound_check(trace, regions);
}

/// Header `slot,h_1..h_M,w`; w on row n is W_n, and 0 on the final row.
inline void write_trace_csv(std::ostream& os, const ChannelTrace& trace) {
  os << "slot";
  for (std::size_t i = 1; i <= trace.users(); ++i) os << ",h_" << i;
  os << ",w\n";
  for (std::size_t n = 0; n < trace.slots(); ++n) {
    os << n;
    for (double h : trace.states[n].gains()) os << ',' << csv::fmt17(h);
    os << ',' << csv::fmt17(n < trace.w_series.size() ? trace.w_series[n] : 0.0) << '\n';
  }
}

/// Inverse of write_trace_csv. Step speeds are recomputed from the gains;
/// the w column is taken as written.
inline ChannelTrace read_trace_csv(std::istream& is, const PowerProfile& profile) {
  std::string line;
  if (!std::getline(is, line)) throw config_error("trace csv: empty input");
  const auto header = csv::split(line);
  const std::size_t m = profile.users();
  if (header.size() != m + 2 || header.front() != "slot" || header.back() != "w")
    throw config_error("trace csv: header must be slot,h_1..h_M,w with M matching the profile");
  ChannelTrace trace{profile, {}, {}, {}};
  std::vector<double> w_column;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != m + 2) throw config_error("trace csv: wrong column count on row " + std::to_string(trace.slots()));
    try {
      if (std::stoull(cells[0]) != trace.slots()) throw config_error("trace csv: slots must be 0,1,2,...");
      std::vector<double> gains(m);
      for (std::size_t i = 0; i < m; ++i) gains[i] = std::stod(cells[i + 1]);
      trace.states.emplace_back(std::move(gains));
      w_column.push_back(std::stod(cells.back()));
    } catch (const std::logic_error& e) {
      throw config_error(std::string("trace csv: unparsable number: ") + e.what());
    }
  }
  if (trace.states.empty()) throw config_error("trace csv: no rows");
  detail::fill_speeds(trace);
  w_column.pop_back();
  trace.w_series = std::move(w_column);
  return trace;
}

}  // namespace fadingmac

#endif  // FADINGMAC_CHANNEL_HPP
