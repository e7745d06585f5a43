#ifndef FADINGMAC_VERIFICATION_HPP
#define FADINGMAC_VERIFICATION_HPP

// Desk-scale property suites with fixed seeds. Each check returns claims;
// `verify` and the acceptance binary both run these.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fadingmac/capacity_region.hpp"
#include "fadingmac/channel.hpp"
#include "fadingmac/harness.hpp"
#include "fadingmac/policies.hpp"
#include "fadingmac/report.hpp"
#include "fadingmac/solver.hpp"
#include "fadingmac/utility.hpp"

namespace fadingmac::verify {

struct Options {
  std::uint64_t seed = 20240917;
  double inflate_track = 1.0;  // negative control for the tracking and drift claims
  std::filesystem::path scratch = std::filesystem::temp_directory_path() / "fadingmac-verify";
};

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

inline GaussianMacRegion random_region(std::mt19937_64& rng, std::size_t m, bool random_powers = true) {
  std::vector<double> p(m), h(m);
  for (auto& x : p) x = random_powers ? uniform(rng, 0.5, 2.0) : 1.0;
  for (auto& x : h) x = uniform(rng, 0.5, 2.0);
  return GaussianMacRegion(PowerProfile(p, 1.0), ChannelState(h));
}

inline std::vector<std::vector<std::size_t>> all_orders(std::size_t m) {
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(order);
  while (std::next_permutation(order.begin(), order.end()));
  return out;
}

/// Random feasible point: scaled convex combination of three chain vertices.
inline RateVector random_feasible(std::mt19937_64& rng, const Polymatroid& region) {
  const std::size_t m = region.users();
  RateVector z = RateVector::Zero(static_cast<Eigen::Index>(m));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  double total = 0.0;
  std::vector<double> lam(3);
  for (auto& l : lam) total += (l = unit_uniform(rng) + 1e-3);
  for (double l : lam) {
    std::shuffle(order.begin(), order.end(), rng);
    z += (l / total) * dominant_face_vertex(region, order);
  }
  return unit_uniform(rng) * z;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline UtilityModel log_utility(const PowerProfile& profile, std::vector<double> w, double h_max) {
  return UtilityModel(UtilityFamily::weighted_log,
                      Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())),
                      certified_box(profile, h_max));
}

/// Two-user log-utility maximum by a 1e-3 grid on r_1; r_2 is filled up to the boundary.
inline double grid_log_max(const Polymatroid& region, const UtilityModel& u, double step) {
  const double f1 = region.rank(SubsetId::single(0));
  const double f2 = region.rank(SubsetId::single(1));
  const double f12 = region.rank(SubsetId{3});
  double best = -1.0;
  const auto n = static_cast<std::size_t>(std::floor(f1 / step));
  for (std::size_t i = 0; i <= n + 1; ++i) {
    const double r1 = std::min(f1, static_cast<double>(i) * step);
    RateVector r(2);
    r << r1, std::max(0.0, std::min(f2, f12 - r1));
    best = std::max(best, value(u, r));
  }
  return best;
}

}  // namespace detail

/// Scenario S1: two users, unit powers and noise, gains reflected in [0.5, 2],
/// per-user step bound 1e-4 (so the maximum region speed is 1e-4), log utility w = (1, 1).
inline ExperimentConfig s1_config(std::size_t horizon, std::uint64_t seed) {
  ExperimentConfig c;
  c.fading.users = 2;
  c.fading.h_min = 0.5;
  c.fading.h_max = 2.0;
  c.fading.v_hat = {1e-4, 1e-4};
  c.fading.horizon = horizon;
  c.fading.seed = seed;
  c.powers = {1.0, 1.0};
  c.noise = 1.0;
  c.family = UtilityFamily::weighted_log;
  c.weights = {1.0, 1.0};
  c.cadence = CadenceSetting::every_slot;
  return c;
}

inline VerificationReport check_projection(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(o.seed + 1);
  double worst_feas = 0.0, worst_nonexp = -1.0, worst_oracle = -1.0;
  for (std::size_t m : {2u, 3u, 4u}) {
    for (int s = 0; s < 20; ++s) {
      const auto region = detail::random_region(rng, m);
      const double top = region.rank(SubsetId::full(m));
      for (int k = 0; k < 1000; ++k) {
        RateVector y(static_cast<Eigen::Index>(m));
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = detail::uniform(rng, -0.5 * top, 1.5 * top);
        const RateVector z = detail::random_feasible(rng, region);
        const RateVector p = approximate_project(region, y);
        const RateVector q = exact_project_oracle(region, y);
        worst_feas = std::max(worst_feas, max_violation(region, p));
        worst_nonexp = std::max(worst_nonexp, (p - z).norm() - (y - z).norm());
        worst_oracle = std::max(worst_oracle, (q - y).norm() - (p - y).norm());
      }
    }
  }
  VerificationReport r;
  r.claims.push_back(claim_le("projection-feasible", worst_feas, 0.0, 1e-9, "max violation, 60000 points"));
  r.claims.push_back(claim_le("projection-nonexpansive", worst_nonexp, 0.0, 1e-12, "max ||P(y)-z|| - ||y-z||"));
  r.claims.push_back(claim_le("projection-vs-oracle", worst_oracle, 0.0, 1e-8, "max oracle dist - approx dist"));
  r.claims.push_back(claim_le("projection-runtime", detail::seconds_since(t0), 30.0, 0.0, "seconds"));
  return r;
}

inline VerificationReport check_polymatroid(const Options& o) {
  std::mt19937_64 rng(o.seed + 2);
  double worst_sub = -1.0, worst_mono = -1.0;
  for (int s = 0; s < 50; ++s) {
    for (std::size_t m = 1; m <= 4; ++m) {
      const auto region = detail::random_region(rng, m);
      const auto f = [&](std::uint32_t mask) { return mask == 0 ? 0.0 : region.rank(SubsetId{mask}); };
      const std::uint32_t n = 1u << m;
      for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = 0; b < n; ++b)
          worst_sub = std::max(worst_sub, f(a | b) + f(a & b) - f(a) - f(b));
        for (std::size_t i = 0; i < m; ++i) worst_mono = std::max(worst_mono, f(a) - f(a | (1u << i)));
      }
    }
  }
  VerificationReport r;
  r.claims.push_back(claim_le("polymatroid-submodular", worst_sub, 0.0, 1e-12, "max f(AuB)+f(AnB)-f(A)-f(B)"));
  r.claims.push_back(claim_le("polymatroid-monotone", worst_mono, 0.0, 1e-12, "max f(A)-f(A+i)"));
  return r;
}

inline VerificationReport check_appendix(const Options& o) {
  std::mt19937_64 rng(o.seed + 3);
  double worst = 0.0, worst_convex = -1.0;
  for (int s = 0; s < 50; ++s) {
    const std::size_t m = 2 + static_cast<std::size_t>(rng() % 3);
    const auto region = detail::random_region(rng, m);
    const double delta = detail::uniform(rng, 0.001, 0.1);
    const Polymatroid big = expand(region, delta);
    const double top = region.rank(SubsetId::full(m));
    std::vector<RateVector> vertices, witnesses;
    for (const auto& order : detail::all_orders(m)) {
      const RateVector v = dominant_face_vertex(big, order);
      const RateVector w = expansion_face_witness(region, delta, v, order);
      worst = std::max({worst, max_violation(region, w), std::abs(w.sum() - top), std::abs((v - w).norm() - delta)});
      vertices.push_back(v);
      witnesses.push_back(w);
    }
    for (int c = 0; c < 10; ++c) {
      std::vector<double> lam(vertices.size());
      double total = 0.0;
      for (auto& l : lam) total += (l = unit_uniform(rng));
      RateVector x = RateVector::Zero(static_cast<Eigen::Index>(m)), xw = x;
      for (std::size_t i = 0; i < lam.size(); ++i) {
        x += lam[i] / total * vertices[i];
        xw += lam[i] / total * witnesses[i];
      }
      worst_convex = std::max({worst_convex, max_violation(region, xw), (x - xw).norm() - delta});
    }
  }
  VerificationReport r;
  r.claims.push_back(claim_le("appendix-witness", worst, 0.0, 1e-12, "feasible, on face, exactly delta away"));
  r.claims.push_back(claim_le("appendix-convex", worst_convex, 0.0, 1e-12, "convex combinations within delta"));
  return r;
}

inline VerificationReport check_lemma1(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(o.seed + 4);
  const PowerProfile profile({1.0, 1.0}, 1.0);
  const UtilityModel u = detail::log_utility(profile, {1.0, 1.0}, 2.0);
  const UtilityConstants uc = constants(u);
  const double ratio = uc.B / uc.growth();
  double worst_slack = -1e300, obs = 0.0, bnd = 0.0;
  for (int s = 0; s < 100; ++s) {
    const GaussianMacRegion a(profile, ChannelState({detail::uniform(rng, 0.5, 2.0), detail::uniform(rng, 0.5, 2.0)}));
    const GaussianMacRegion b(profile, ChannelState({detail::uniform(rng, 0.5, 2.0), detail::uniform(rng, 0.5, 2.0)}));
    const double delta = region_distance(a, b);
    const double dist = (greedy_oracle(a, u).best_iterate - greedy_oracle(b, u).best_iterate).norm() * o.inflate_track;
    const double bound = std::sqrt(delta) * (std::sqrt(delta) + std::sqrt(ratio));
    if (dist - bound > worst_slack) {
      worst_slack = dist - bound;
      obs = dist;
      bnd = bound;
    }
  }
  VerificationReport r;
  r.claims.push_back(claim_le("lemma1-bound", obs, bnd, 1e-4, "worst of 100 pairs"));
  r.claims.push_back(claim_le("lemma1-runtime-seconds", detail::seconds_since(t0), 120.0, 0.0, "seconds"));
  return r;
}

inline VerificationReport check_lemma2(const Options& o) {
  std::mt19937_64 rng(o.seed + 5);
  double worst_slack = -1e300, obs = 0.0, bnd = 0.0;
  int traces = 0;
  for (std::size_t m : {2u, 3u}) {
    for (int variant = 0; variant < 3; ++variant) {
      FadingConfig cfg;
      cfg.users = m;
      cfg.h_min = 0.5;
      cfg.h_max = 2.0;
      cfg.horizon = 10000;
      cfg.seed = rng();
      for (std::size_t i = 0; i < m; ++i) cfg.v_hat.push_back(detail::uniform(rng, 1e-4, 0.05));
      if (variant == 1) cfg.law = {StepLawKind::scaled_beta, 2.0, 5.0};
      if (variant == 2) cfg.law = {StepLawKind::scaled_beta, 0.5, 0.5};
      std::vector<double> p(m);
      for (auto& x : p) x = detail::uniform(rng, 0.5, 2.0);
      const PowerProfile profile(p, detail::uniform(rng, 0.5, 2.0));
      const ChannelTrace trace = generate_trace(cfg, profile);
      const auto regions = regions_of(trace);
      const WBoundResult res = w_bound_detail(trace, regions);
      if (res.worst_slack > worst_slack) {
        worst_slack = res.worst_slack;
        obs = region_distance(regions[res.worst_slot], regions[res.worst_slot + 1]);
        bnd = trace.w_series[res.worst_slot];
      }
      ++traces;
    }
  }
  VerificationReport r;
  r.claims.push_back(claim_le("lemma2-step", obs, bnd, 1e-12, "worst step of " + std::to_string(traces) + " traces"));
  return r;
}

inline VerificationReport check_oracle(const Options& o) {
  std::mt19937_64 rng(o.seed + 6);
  double worst_log = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto region = detail::random_region(rng, 2);
    const UtilityModel u = detail::log_utility(region.profile(), {detail::uniform(rng, 0.5, 2.0), detail::uniform(rng, 0.5, 2.0)}, 2.0);
    worst_log = std::max(worst_log, std::abs(greedy_oracle(region, u).best_value - detail::grid_log_max(region, u, 1e-3)));
  }
  double worst_lin = 0.0;
  for (std::size_t m : {2u, 3u, 4u}) {
    for (int s = 0; s < 20; ++s) {
      const auto region = detail::random_region(rng, m);
      Eigen::VectorXd w(static_cast<Eigen::Index>(m));
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = detail::uniform(rng, 0.1, 2.0);
      const UtilityModel u(UtilityFamily::weighted_linear, w, Eigen::VectorXd::Ones(w.size()));
      double brute = -1.0;
      for (const auto& order : detail::all_orders(m)) brute = std::max(brute, w.dot(dominant_face_vertex(region, order)));
      worst_lin = std::max(worst_lin, std::abs(greedy_oracle(region, u).best_value - brute));
    }
  }
  VerificationReport r;
  r.claims.push_back(claim_le("oracle-log-grid", worst_log, 0.0, 2e-3, "max |du| vs 1e-3 grid, 20 states"));
  r.claims.push_back(claim_le("oracle-linear", worst_lin, 0.0, 1e-6, "max |du| vs all chain vertices"));
  return r;
}

inline VerificationReport check_solve_c(const Options&) {
  double worst = 0.0;
  for (double w : {0.0, 1e-8, std::ldexp(1.0, -8), 0.1}) {
    const double c = solve_c(w);
    const double q = c * c - 1.0;
    const double lhs = std::pow(q, 8) / (256.0 * std::pow(c, 4));
    worst = std::max({worst, std::abs(lhs - w), 1.0 - c});
  }
  int breaks = 0;
  double prev = solve_c(0.0);
  for (double w = 1e-12; w < 10.0; w *= 1.7) {
    const double c = solve_c(w);
    if (!(c > prev)) ++breaks;
    prev = c;
  }
  VerificationReport r;
  r.claims.push_back(claim_le("solve-c-residual", worst, 0.0, 1e-10, "max residual / (1 - c) over 4 inputs"));
  r.claims.push_back(claim_le("solve-c-monotone", breaks, 0.0, 0.0, "non-increasing steps on a geometric grid"));
  return r;
}

namespace detail {

inline const Claim& pick(const VerificationReport& rep, std::string_view id) {
  const Claim* c = rep.find(id);
  if (!c) throw std::logic_error("missing claim " + std::string(id));
  return *c;
}

}  // namespace detail

inline VerificationReport check_thm1(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = s1_config(10000, o.seed + 7);
  cfg.policy = PolicySelection::approximate;
  cfg.debug_inflate_track = o.inflate_track;
  const SimulationResult res = run_simulation(cfg);
  VerificationReport r;
  r.claims.push_back(detail::pick(res.report, "thm1-bound"));
  r.claims.push_back(detail::pick(res.report, "thm1-induction"));
  r.claims.push_back(claim_le("thm1-seconds", detail::seconds_since(t0), 600.0, 0.0, "seconds"));
  return r;
}

inline VerificationReport check_thm2(const Options& o) {
  ExperimentConfig cfg = s1_config(100000, o.seed + 8);
  cfg.policy = PolicySelection::improved;
  cfg.cadence = CadenceSetting::block_boundaries;
  const SimulationResult res = run_simulation(cfg);
  VerificationReport r;
  Claim ratio = claim_near("thm2-ratio", renewal_ratio(*res.improved, res.avg->k), 1.0, 0.05,
                           std::to_string(res.improved->renewal_times.size()) + " renewals, k=" + std::to_string(res.avg->k));
  r.claims.push_back(ratio);
  Claim l3 = detail::pick(res.report, "lemma3-runtime:improved");
  l3.id = "lemma3-runtime";
  r.claims.push_back(l3);
  return r;
}

inline VerificationReport check_thm3(const Options& o) {
  ExperimentConfig cfg = s1_config(10000, o.seed + 9);
  cfg.policy = PolicySelection::improved;
  cfg.debug_inflate_track = o.inflate_track;
  const SimulationResult res = run_simulation(cfg);
  VerificationReport r;
  r.claims.push_back(detail::pick(res.report, "thm3-bound"));
  r.claims.push_back(detail::pick(res.report, "thm3-induction"));
  return r;
}

namespace detail {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace detail

/// Two runs of the same config into separate directories must produce identical bytes.
inline VerificationReport check_determinism(const Options& o) {
  namespace fs = std::filesystem;
  int mismatches = 0;
  std::size_t files = 0;
  for (OutputFormat fmt : {OutputFormat::csv, OutputFormat::json}) {
    std::vector<std::vector<fs::path>> written;
    for (int rep = 0; rep < 2; ++rep) {
      ExperimentConfig cfg = s1_config(2000, o.seed + 10);
      cfg.fading.v_hat = {2e-3, 1e-3};
      cfg.format = fmt;
      cfg.output_dir = (o.scratch / ("det-" + std::to_string(static_cast<int>(fmt)) + "-" + std::to_string(rep))).string();
      fs::remove_all(cfg.output_dir);
      written.push_back(write_outputs(cfg, run_simulation(cfg)));
    }
    if (written[0].size() != written[1].size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t i = 0; i < written[0].size(); ++i) {
      ++files;
      if (detail::slurp(written[0][i]) != detail::slurp(written[1][i])) ++mismatches;
    }
  }
  VerificationReport r;
  r.claims.push_back(claim_le("determinism", mismatches, 0.0, 0.0, std::to_string(files) + " file pairs compared"));
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemmas", "theorems", "all"};
  return names;
}

/// suite: lemmas | theorems | all, or a single check name (projection, polymatroid,
/// appendix, lemma1, lemma2, oracle, solve-c, thm1, thm2, thm3, determinism).
inline VerificationReport run_suite(const std::string& suite, const Options& o = {}) {
  using Check = VerificationReport (*)(const Options&);
  const std::vector<std::pair<std::string, Check>> lemmas{
      {"projection", check_projection}, {"polymatroid", check_polymatroid}, {"appendix", check_appendix},
      {"lemma1", check_lemma1},         {"lemma2", check_lemma2},           {"oracle", check_oracle},
      {"solve-c", check_solve_c}};
  const std::vector<std::pair<std::string, Check>> theorems{
      {"thm1", check_thm1}, {"thm2", check_thm2}, {"thm3", check_thm3}, {"determinism", check_determinism}};
  VerificationReport out;
  const bool all = suite == "all";
  bool matched = all || suite == "lemmas" || suite == "theorems";
  if (all || suite == "lemmas")
    for (const auto& [name, fn] : lemmas) out.append(fn(o));
  if (all || suite == "theorems")
    for (const auto& [name, fn] : theorems) out.append(fn(o));
  if (!matched) {
    for (const auto* group : {&lemmas, &theorems})
      for (const auto& [name, fn] : *group)
        if (name == suite) {
          out.append(fn(o));
          matched = true;
        }
  }
  if (!matched) throw config_error("verify: unknown suite '" + suite + "'");
  return out;
}

}  // namespace fadingmac::verify

#endif  // FADINGMAC_VERIFICATION_HPP
