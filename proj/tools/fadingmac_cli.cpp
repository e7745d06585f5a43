// fadingmac: simulate | bounds | project | verify
// Exit codes: 0 all claims pass, 1 claim failure, 2 configuration or usage error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fadingmac/fadingmac.hpp"

namespace fm = fadingmac;

namespace {

constexpr int kExitClaim = 1;
constexpr int kExitConfig = 2;

std::string vec_text(const fm::RateVector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fm::csv::fmt17(v[i]);
  return s + ")";
}

void print_report(const fm::VerificationReport& rep) {
  for (const auto& c : rep.claims) std::cout << fm::format_claim(c) << '\n';
  std::cout << (rep.all_pass() ? "ALL CLAIMS PASS" : "CLAIM FAILURE") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate allocation tracking on fading Gaussian multiple-access channels"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format;
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* sim = app.add_subcommand("simulate", "Generate a trace, run the policies, check the tracking claims");
  std::string config_path;
  double inflate = 1.0;
  sim->add_option("--config", config_path, "Experiment JSON")->required();
  sim->add_option("--debug-inflate-track", inflate, "Scale observed tracking errors (negative control)");

  auto* bounds = app.add_subcommand("bounds", "Parameter table for both policies");
  double A = 0.0, B = 0.0, w_hat = 0.0, w_bar = 0.0;
  bounds->add_option("--A", A, "Growth constant")->required();
  bounds->add_option("--B", B, "Subgradient bound")->required();
  bounds->add_option("--what", w_hat, "Maximum region speed")->required();
  bounds->add_option("--wbar", w_bar, "Mean region speed")->required();

  auto* project = app.add_subcommand("project", "Approximate and exact projection of a point");
  std::string h_text, p_text, point_text;
  double n0 = 1.0;
  project->add_option("--H", h_text, "Gains, comma separated")->required();
  project->add_option("--P", p_text, "Powers, comma separated")->required();
  project->add_option("--N0", n0, "Noise power")->required();
  project->add_option("--point", point_text, "Rate vector, comma separated")->required();

  auto* verify = app.add_subcommand("verify", "Run the property suites");
  std::string suite = "all";
  verify->add_option("--suite", suite, "lemmas | theorems | all | single check name");
  verify->add_option("--debug-inflate-track", inflate, "Scale observed tracking errors (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) {
      fm::ExperimentConfig cfg = fm::load_config(config_path);
      if (seed) cfg.fading.seed = *seed;
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (!format.empty()) cfg.format = format == "json" ? fm::OutputFormat::json : fm::OutputFormat::csv;
      cfg.debug_inflate_track = inflate;
      fm::validate_config(cfg);
      const fm::SimulationResult res = fm::run_simulation(cfg);
      const auto files = fm::write_outputs(cfg, res);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto* run : {res.approximate ? &*res.approximate : nullptr, res.improved ? &*res.improved : nullptr})
        if (run)
          for (const auto& w : run->warnings) std::cerr << "warning (" << fm::to_string(run->kind) << "): " << w << '\n';
      print_report(res.report);
      for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
      return res.report.all_pass() ? 0 : kExitClaim;
    }
    if (*bounds) {
      std::cout << fm::format_bounds(fm::cmd_bounds(A, B, w_hat, w_bar));
      return 0;
    }
    if (*project) {
      const auto r = fm::cmd_project(fm::parse_csv_numbers(h_text), fm::parse_csv_numbers(p_text), n0,
                                     fm::parse_csv_numbers(point_text));
      std::cout << "input        " << vec_text(r.input) << '\n'
                << "approximate  " << vec_text(r.approximate) << "  distance " << fm::csv::fmt17(r.approximate_distance) << '\n'
                << "exact        " << vec_text(r.exact) << "  distance " << fm::csv::fmt17(r.exact_distance) << '\n';
      return 0;
    }
    if (*verify) {
      fm::verify::Options opt;
      if (seed) opt.seed = *seed;
      opt.inflate_track = inflate;
      const auto rep = fm::verify::run_suite(suite, opt);
      print_report(rep);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(std::filesystem::path(out_dir) / "report.json") << fm::to_json(rep).dump(2) << '\n';
      }
      return rep.all_pass() ? 0 : kExitClaim;
    }
  } catch (const fm::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fm::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fm::nonconvergence_error& e) {
    std::cerr << "solver did not converge: " << e.what() << '\n';
    return kExitClaim;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitClaim;
  }
  return 0;
}
