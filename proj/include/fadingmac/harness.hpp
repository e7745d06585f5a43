#ifndef FADINGMAC_HARNESS_HPP
#define FADINGMAC_HARNESS_HPP

// Experiment plumbing: JSON configuration, scenario execution, output files
// and the claim report used for exit codes (0 pass, 1 claim failure, 2 config error).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fadingmac/capacity_region.hpp"
#include "fadingmac/channel.hpp"
#include "fadingmac/csv.hpp"
#include "fadingmac/errors.hpp"
#include "fadingmac/policies.hpp"
#include "fadingmac/report.hpp"
#include "fadingmac/solver.hpp"
#include "fadingmac/utility.hpp"

namespace fadingmac {

enum class PolicySelection { approximate, improved, both };
enum class CadenceSetting { automatic, every_slot, block_boundaries };
enum class MeanSpeedSource { analytic, empirical };
enum class OutputFormat { csv, json };

/// Speeds below this are treated as this value when sizing k, alpha, theta and gamma;
/// the formulas diverge at zero speed.
inline constexpr double kSpeedFloor = 1e-8;

struct ExperimentConfig {
  FadingConfig fading;
  std::vector<double> powers;
  double noise = 1.0;
  UtilityFamily family = UtilityFamily::weighted_log;
  std::vector<double> weights;
  PolicySelection policy = PolicySelection::both;
  std::optional<std::size_t> k_override;
  std::optional<double> alpha_override;
  std::optional<double> gamma_override;
  GreedyOptions greedy;
  CadenceSetting cadence = CadenceSetting::automatic;
  double claim_tol = 1e-3;
  MeanSpeedSource mean_speed = MeanSpeedSource::analytic;
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::csv;
  double debug_inflate_track = 1.0;  // negative control: scales observed tracking errors

  PowerProfile profile() const { return PowerProfile(powers, noise); }
  OracleCadence resolved_cadence() const {
    if (cadence == CadenceSetting::every_slot) return OracleCadence::every_slot;
    if (cadence == CadenceSetting::block_boundaries) return OracleCadence::block_boundaries;
    return fading.users <= 3 ? OracleCadence::every_slot : OracleCadence::block_boundaries;
  }
};

namespace detail {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: field '") + key + "' has the wrong type");
  }
}

template <class T>
T require(const nlohmann::json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw config_error(std::string("config: missing field '") + key + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw config_error(std::string("config: field '") + key + "' in " + where + " has the wrong type");
  }
}

inline const nlohmann::json& require_object(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object())
    throw config_error(std::string("config: missing object '") + key + "'");
  return j.at(key);
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> known, const char* where) {
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw config_error(std::string("config: unknown field '") + item.key() + "' in " + where);
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using detail::get_or;
  using detail::require;
  if (!j.is_object()) throw config_error("config: top level must be a JSON object");
  detail::reject_unknown(j, {"seed", "fading", "profile", "utility", "policy", "overrides", "oracle", "wbar", "output", "debug"},
                         "top level");
  ExperimentConfig c;

  const auto& f = detail::require_object(j, "fading");
  detail::reject_unknown(f, {"users", "hMin", "hMax", "vHat", "law", "horizon", "initial"}, "fading");
  c.fading.users = require<std::size_t>(f, "users", "fading");
  c.fading.h_min = require<double>(f, "hMin", "fading");
  c.fading.h_max = require<double>(f, "hMax", "fading");
  c.fading.v_hat = require<std::vector<double>>(f, "vHat", "fading");
  c.fading.horizon = require<std::size_t>(f, "horizon", "fading");
  if (f.contains("initial")) c.fading.initial = require<std::vector<double>>(f, "initial", "fading");
  if (f.contains("law")) {
    const auto& law = f.at("law");
    const auto kind = require<std::string>(law, "kind", "fading.law");
    if (kind == "uniform") {
      c.fading.law.kind = StepLawKind::uniform;
    } else if (kind == "scaled-beta") {
      c.fading.law.kind = StepLawKind::scaled_beta;
      c.fading.law.a = require<double>(law, "a", "fading.law");
      c.fading.law.b = require<double>(law, "b", "fading.law");
    } else {
      throw config_error("config: fading.law.kind must be uniform or scaled-beta");
    }
  }
  c.fading.seed = get_or<std::uint64_t>(j, "seed", 0);

  const auto& p = detail::require_object(j, "profile");
  detail::reject_unknown(p, {"powers", "noise"}, "profile");
  c.powers = require<std::vector<double>>(p, "powers", "profile");
  c.noise = require<double>(p, "noise", "profile");

  const auto& u = detail::require_object(j, "utility");
  detail::reject_unknown(u, {"family", "weights"}, "utility");
  c.family = parse_utility_family(require<std::string>(u, "family", "utility"));
  c.weights = require<std::vector<double>>(u, "weights", "utility");

  const auto policy = get_or<std::string>(j, "policy", "both");
  if (policy == "approximate") c.policy = PolicySelection::approximate;
  else if (policy == "improved") c.policy = PolicySelection::improved;
  else if (policy == "both") c.policy = PolicySelection::both;
  else throw config_error("config: policy must be approximate, improved or both");

  if (j.contains("overrides")) {
    const auto& o = j.at("overrides");
    detail::reject_unknown(o, {"k", "alpha", "gamma"}, "overrides");
    if (o.contains("k")) c.k_override = require<std::size_t>(o, "k", "overrides");
    if (o.contains("alpha")) c.alpha_override = require<double>(o, "alpha", "overrides");
    if (o.contains("gamma")) c.gamma_override = require<double>(o, "gamma", "overrides");
  }

  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    detail::reject_unknown(o, {"tol", "window", "alpha0", "cadence", "claimTol"}, "oracle");
    c.greedy.tol = get_or<double>(o, "tol", c.greedy.tol);
    c.greedy.window = get_or<std::size_t>(o, "window", c.greedy.window);
    c.greedy.alpha0 = get_or<double>(o, "alpha0", c.greedy.alpha0);
    c.claim_tol = get_or<double>(o, "claimTol", c.claim_tol);
    const auto cad = get_or<std::string>(o, "cadence", "auto");
    if (cad == "auto") c.cadence = CadenceSetting::automatic;
    else if (cad == "every-slot") c.cadence = CadenceSetting::every_slot;
    else if (cad == "block-boundaries") c.cadence = CadenceSetting::block_boundaries;
    else throw config_error("config: oracle.cadence must be auto, every-slot or block-boundaries");
  }

  const auto wbar = get_or<std::string>(j, "wbar", "analytic");
  if (wbar == "analytic") c.mean_speed = MeanSpeedSource::analytic;
  else if (wbar == "empirical") c.mean_speed = MeanSpeedSource::empirical;
  else throw config_error("config: wbar must be analytic or empirical");

  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::reject_unknown(o, {"dir", "format"}, "output");
    c.output_dir = get_or<std::string>(o, "dir", c.output_dir);
    const auto fmt = get_or<std::string>(o, "format", "csv");
    if (fmt == "csv") c.format = OutputFormat::csv;
    else if (fmt == "json") c.format = OutputFormat::json;
    else throw config_error("config: output.format must be csv or json");
  }
  if (j.contains("debug")) c.debug_inflate_track = get_or<double>(j.at("debug"), "inflateTrack", 1.0);
  return c;
}

/// Cross-field checks; everything that would otherwise surface mid-run.
inline void validate_config(const ExperimentConfig& c) {
  c.fading.validate();
  if (c.powers.size() != c.fading.users) throw config_error("config: profile.powers needs one entry per user");
  if (c.weights.size() != c.fading.users) throw config_error("config: utility.weights needs one entry per user");
  try {
    (void)c.profile();
    for (double w : c.weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw config_error("config: utility weights must be > 0");
  } catch (const domain_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  if (c.family == UtilityFamily::weighted_linear)
    throw config_error("config: policies need the growth constant A, undefined for weighted-linear utility");
  if (c.k_override && *c.k_override < 1) throw config_error("config: overrides.k must be >= 1");
  if (c.alpha_override && !(*c.alpha_override > 0.0)) throw config_error("config: overrides.alpha must be > 0");
  if (c.gamma_override && !(*c.gamma_override > 0.0)) throw config_error("config: overrides.gamma must be > 0");
  if (!(c.greedy.tol > 0.0) || c.greedy.window < 1) throw config_error("config: oracle.tol > 0 and window >= 1 required");
  if (!(c.claim_tol >= 0.0)) throw config_error("config: oracle.claimTol must be >= 0");
  if (!(c.debug_inflate_track > 0.0)) throw config_error("config: debug.inflateTrack must be > 0");
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config: malformed JSON: ") + e.what());
  }
  ExperimentConfig c = parse_config(j);
  validate_config(c);
  return c;
}

struct SimulationResult {
  explicit SimulationResult(ChannelTrace t) : trace(std::move(t)) {}

  ChannelTrace trace;
  UtilityConstants constants;
  SpeedStats speeds;
  double w_bar_used = 0.0;
  std::optional<WorstCaseParams> worst;
  std::optional<AvgCaseParams> avg;
  std::optional<PolicyRun> approximate;
  std::optional<PolicyRun> improved;
  VerificationReport report;
  std::vector<std::string> warnings;
};

namespace detail {

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

inline std::vector<double> finite_values(const std::vector<double>& xs) {
  std::vector<double> out;
  for (double x : xs)
    if (std::isfinite(x)) out.push_back(x);
  return out;
}

/// Claims derived from one policy run.
inline void policy_claims(const PolicyRun& run, const std::string& bound_id, const std::string& induction_id,
                          bool guaranteed, double claim_tol, double value_tol, double inflate, VerificationReport& rep) {
  const std::string tag = std::string(to_string(run.kind));
  const std::string caveat = guaranteed ? "" : "not guaranteed: k clamped to 1";

  Claim b = claim_le(bound_id, run.max_track_err * inflate, run.bound, claim_tol, caveat);
  b.asserted = guaranteed;
  rep.claims.push_back(b);

  const BlockCheck* worst_start = nullptr;
  const BlockCheck* worst_rate = nullptr;
  const BlockCheck* worst_drift = nullptr;
  std::size_t rate_applied = 0;
  for (const auto& c : run.checks) {
    if (!worst_start || c.start_distance - c.start_bound > worst_start->start_distance - worst_start->start_bound)
      worst_start = &c;
    if (c.rate_applies) {
      ++rate_applied;
      if (!worst_rate || c.rate_floor_value - c.best_value > worst_rate->rate_floor_value - worst_rate->best_value)
        worst_rate = &c;
    }
    if (c.has_drift && (!worst_drift || c.drift - c.drift_bound > worst_drift->drift - worst_drift->drift_bound))
      worst_drift = &c;
  }
  Claim s = claim_le(induction_id, worst_start->start_distance * inflate, worst_start->start_bound, claim_tol,
                     "block " + std::to_string(worst_start->block) + caveat);
  s.asserted = guaranteed;
  rep.claims.push_back(s);

  const std::string counts = std::to_string(rate_applied) + "/" + std::to_string(run.checks.size()) + " blocks";
  if (worst_rate) {
    rep.claims.push_back(claim_le("lemma3-runtime:" + tag, worst_rate->rate_floor_value - worst_rate->best_value, 0.0,
                                  value_tol, "floor minus best utility, " + counts));
  } else {
    Claim c = claim_le("lemma3-runtime:" + tag, 0.0, 0.0, value_tol, "vacuous: iteration condition never met");
    rep.claims.push_back(c);
  }
  if (worst_drift) {
    rep.claims.push_back(claim_le("lemma1-runtime:" + tag, worst_drift->drift, worst_drift->drift_bound, claim_tol,
                                  "delta=" + csv::fmt17(worst_drift->delta)));
  } else {
    rep.claims.push_back(claim_le("lemma1-runtime:" + tag, 0.0, 0.0, claim_tol, "vacuous: single block"));
  }
}

}  // namespace detail

inline SimulationResult run_simulation(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const PowerProfile profile = cfg.profile();
  SimulationResult res(generate_trace(cfg.fading, profile));

  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(cfg.weights.data(), static_cast<Eigen::Index>(cfg.weights.size()));
  const UtilityModel u(cfg.family, w, certified_box(profile, cfg.fading.h_max));
  res.constants = constants(u);
  const double A = res.constants.growth();
  const double B = res.constants.B;

  res.speeds = speed_stats(res.trace, cfg.fading);
  res.w_bar_used = cfg.mean_speed == MeanSpeedSource::analytic ? analytic_mean_speed(cfg.fading, profile) : res.speeds.w_bar;
  double w_hat = res.speeds.w_hat_bound;
  double w_bar = std::min(res.w_bar_used, w_hat);
  if (w_hat < kSpeedFloor) {
    res.warnings.push_back("maximum speed below " + csv::fmt17(kSpeedFloor) + "; parameters sized at the floor");
    w_hat = kSpeedFloor;
  }
  if (w_bar < kSpeedFloor) {
    res.warnings.push_back("mean speed below " + csv::fmt17(kSpeedFloor) + "; parameters sized at the floor");
    w_bar = kSpeedFloor;
  }

  PolicyOptions opt;
  opt.cadence = cfg.resolved_cadence();
  opt.greedy = cfg.greedy;
  opt.oracle_tol = cfg.claim_tol;

  if (cfg.policy != PolicySelection::improved) {
    WorstCaseParams p = worst_case_params(A, B, w_hat);
    if (cfg.k_override) {
      p.k = *cfg.k_override;
      p.k_clamped = false;
    }
    if (cfg.alpha_override) p.alpha = *cfg.alpha_override;
    p.block_drift_ratio = static_cast<double>(p.k) * p.w_prime / p.theta;
    res.worst = p;
    res.approximate = run_approximate_policy(res.trace, u, p, opt);
    detail::policy_claims(*res.approximate, "thm1-bound", "thm1-induction", !p.k_clamped, cfg.claim_tol, opt.value_tol,
                          cfg.debug_inflate_track, res.report);
  }
  if (cfg.policy != PolicySelection::approximate) {
    AvgCaseParams p = avg_case_params(A, B, w_bar, std::max(w_hat, w_bar));
    if (cfg.gamma_override) {
      p.gamma = *cfg.gamma_override;
      const double k_real = std::floor(p.gamma / w_bar);
      p.k_clamped = k_real < 1.0;
      p.k = p.k_clamped ? 1 : static_cast<std::size_t>(k_real);
      p.alpha = A * p.gamma * p.gamma / (B * B);
    }
    if (cfg.k_override) {
      p.k = *cfg.k_override;
      p.k_clamped = false;
    }
    if (cfg.alpha_override) p.alpha = *cfg.alpha_override;
    res.avg = p;
    res.improved = run_improved_policy(res.trace, u, p, opt);
    detail::policy_claims(*res.improved, "thm3-bound", "thm3-induction", !p.k_clamped, cfg.claim_tol, opt.value_tol,
                          cfg.debug_inflate_track, res.report);
    if (!res.improved->renewal_times.empty()) {
      Claim r = claim_near("thm2-ratio", renewal_ratio(*res.improved, p.k), 1.0, 0.05, "asymptotic; finite-horizon diagnostic");
      r.asserted = false;
      res.report.claims.push_back(r);
    }
  }
  return res;
}

namespace detail {

inline nlohmann::json run_summary(const PolicyRun& run) {
  const auto errs = finite_values(run.track_err);
  nlohmann::json j;
  j["k"] = run.k;
  j["alpha"] = run.alpha;
  j["epsilon"] = run.epsilon;
  j["bound"] = run.bound;
  j["trackErr"] = {{"max", json_number(run.max_track_err)},
                   {"mean", json_number(run.mean_track_err)},
                   {"p50", json_number(quantile(errs, 0.5))},
                   {"p90", json_number(quantile(errs, 0.9))},
                   {"p99", json_number(quantile(errs, 0.99))},
                   {"referenceSlots", errs.size()}};
  j["gradientIterations"] = run.gradient_iterations;
  j["measurements"] = run.measurements;
  j["blocks"] = run.block_starts.size();
  j["instantaneousViolationMax"] = run.instantaneous_violation_max;
  j["warnings"] = run.warnings;
  if (run.kind == PolicyKind::improved) {
    j["renewals"] = run.renewal_times.size();
    j["renewalRatio"] = run.renewal_times.empty() ? nlohmann::json(nullptr) : nlohmann::json(renewal_ratio(run, run.k));
  }
  return j;
}

inline nlohmann::json policy_json(const PolicyRun& run, const ChannelTrace& trace) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t n = 0; n < run.slots(); ++n) {
    nlohmann::json r;
    r["slot"] = n;
    r["block"] = run.block_index[n];
    r["tau"] = run.tau[n];
    r["h"] = trace.states[n].gains();
    r["r"] = std::vector<double>(run.allocated[n].data(), run.allocated[n].data() + run.allocated[n].size());
    if (run.greedy_ref[n])
      r["rbar"] = std::vector<double>(run.greedy_ref[n]->data(), run.greedy_ref[n]->data() + run.greedy_ref[n]->size());
    else
      r["rbar"] = nullptr;
    r["track_err"] = json_number(run.track_err[n]);
    r["bound"] = run.bound;
    rows.push_back(std::move(r));
  }
  return rows;
}

inline nlohmann::json trace_json(const ChannelTrace& trace) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t n = 0; n < trace.slots(); ++n)
    rows.push_back({{"slot", n}, {"h", trace.states[n].gains()}, {"w", n < trace.w_series.size() ? trace.w_series[n] : 0.0}});
  return rows;
}

/// Write to a sibling temporary, then rename over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("output: cannot write " + tmp);
    out << content;
    if (!out) throw config_error("output: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline nlohmann::json summary_json(const ExperimentConfig& cfg, const SimulationResult& res) {
  nlohmann::json j;
  j["seed"] = cfg.fading.seed;
  j["users"] = cfg.fading.users;
  j["horizon"] = cfg.fading.horizon;
  j["oracleCadence"] = cfg.resolved_cadence() == OracleCadence::every_slot ? "every-slot" : "block-boundaries";
  j["constants"] = {{"A", res.constants.growth()}, {"B", res.constants.B}};
  j["speeds"] = {{"wHat", res.speeds.w_hat_bound}, {"wBarEmpirical", res.speeds.w_bar}, {"wBarUsed", res.w_bar_used}};
  if (res.worst) {
    const auto& p = *res.worst;
    j["approximate"] = detail::run_summary(*res.approximate);
    j["approximate"]["params"] = {{"k", p.k},         {"alpha", p.alpha},         {"theta", p.theta},
                                  {"wPrime", p.w_prime}, {"kClamped", p.k_clamped}, {"blockDriftRatio", p.block_drift_ratio}};
  }
  if (res.avg) {
    const auto& p = *res.avg;
    j["improved"] = detail::run_summary(*res.improved);
    j["improved"]["params"] = {{"k", p.k}, {"alpha", p.alpha}, {"gamma", p.gamma}, {"c", p.c}, {"wBar", p.w_bar}, {"kClamped", p.k_clamped}};
  }
  j["report"] = to_json(res.report);
  j["warnings"] = res.warnings;
  return j;
}

/// Files: trace, one per policy, summary.json. Content depends only on (cfg, seed).
inline std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg, const SimulationResult& res) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw config_error("output: cannot create " + dir.string());
  std::vector<fs::path> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    detail::write_atomic(dir / name, content);
    written.push_back(dir / name);
  };
  if (cfg.format == OutputFormat::csv) {
    std::ostringstream t;
    write_trace_csv(t, res.trace);
    emit("trace.csv", t.str());
    for (const auto* run : {res.approximate ? &*res.approximate : nullptr, res.improved ? &*res.improved : nullptr}) {
      if (!run) continue;
      std::ostringstream os;
      write_policy_csv(os, *run, res.trace);
      emit(std::string(to_string(run->kind)) + ".csv", os.str());
    }
  } else {
    emit("trace.json", detail::trace_json(res.trace).dump(1) + "\n");
    for (const auto* run : {res.approximate ? &*res.approximate : nullptr, res.improved ? &*res.improved : nullptr}) {
      if (!run) continue;
      emit(std::string(to_string(run->kind)) + ".json", detail::policy_json(*run, res.trace).dump(1) + "\n");
    }
  }
  emit("summary.json", summary_json(cfg, res).dump(2) + "\n");
  return written;
}

struct BoundsTable {
  WorstCaseParams worst;
  AvgCaseParams avg;
};

inline BoundsTable cmd_bounds(double A, double B, double w_hat, double w_bar) {
  return {worst_case_params(A, B, w_hat), avg_case_params(A, B, w_bar, w_hat)};
}

inline std::string format_bounds(const BoundsTable& t) {
  std::ostringstream os;
  char buf[160];
  const auto row = [&](const char* name, const std::string& a, const std::string& b) {
    std::snprintf(buf, sizeof buf, "%-8s %-24s %-24s\n", name, a.c_str(), b.c_str());
    os << buf;
  };
  const auto num = [](double v) { return csv::fmt17(v); };
  row("", "worst-case", "average-case");
  row("k", std::to_string(t.worst.k) + (t.worst.k_clamped ? " (clamped)" : ""),
      std::to_string(t.avg.k) + (t.avg.k_clamped ? " (clamped)" : ""));
  row("alpha", num(t.worst.alpha), num(t.avg.alpha));
  row("theta", num(t.worst.theta), "-");
  row("w'", num(t.worst.w_prime), "-");
  row("gamma", "-", num(t.avg.gamma));
  row("c", "-", num(t.avg.c));
  row("bound", num(t.worst.bound()), num(t.avg.bound()));
  row("kw'/th", num(t.worst.block_drift_ratio), "-");
  return os.str();
}

struct ProjectionReport {
  RateVector input;
  RateVector approximate;
  RateVector exact;
  double approximate_distance = 0.0;
  double exact_distance = 0.0;
};

inline ProjectionReport cmd_project(const std::vector<double>& gains, const std::vector<double>& powers, double noise,
                                    const std::vector<double>& point) {
  const GaussianMacRegion region(PowerProfile(powers, noise), ChannelState(gains));
  if (point.size() != region.users()) throw domain_error("project: point length does not match user count");
  ProjectionReport r;
  r.input = Eigen::Map<const RateVector>(point.data(), static_cast<Eigen::Index>(point.size()));
  r.approximate = approximate_project(region, r.input);
  r.exact = exact_project_oracle(region, r.input);
  r.approximate_distance = (r.approximate - r.input).norm();
  r.exact_distance = (r.exact - r.input).norm();
  return r;
}

inline std::vector<double> parse_csv_numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : csv::split(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::logic_error&) {
      throw config_error("cannot parse number '" + cell + "'");
    }
    if (used != cell.size()) throw config_error("cannot parse number '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace fadingmac

#endif  // FADINGMAC_HARNESS_HPP
