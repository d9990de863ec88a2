#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "covrec/diagnostics.hpp"
#include "covrec/io.hpp"
#include "covrec/measurement.hpp"
#include "covrec/reconstruction.hpp"

// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 verification
// failure.

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerifyFailed = 3;

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw covrec::io_error("cannot open config '" + path + "'");
  }
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " + e.what());
  }
  reject_unknown_keys(cfg,
                      {"state", "samples_per_quadrature", "efficiency", "seed",
                       "include_f", "f_policy", "correct_efficiency",
                       "project_to_physical", "bootstrap", "bootstrap_resamples", "out"},
                      "config");
  if (cfg.contains("state")) {
    reject_unknown_keys(cfg["state"], {"kind", "r", "nbar_a", "nbar_b", "file"},
                        "config.state");
  }
  return cfg;
}

// config file fills every value the command line left untouched
template <typename T>
void maybe_set(const CLI::App& cmd, const std::string& flag, const json& cfg,
               const json::json_pointer& key, T& value) {
  if (cmd.count(flag) == 0 && cfg.contains(key)) {
    value = cfg.at(key).get<T>();
  }
}

struct SimulateArgs {
  std::string config_path;
  std::string state_kind = "tmss";
  double r = 0.5;
  double nbar_a = 0.0;
  double nbar_b = 0.0;
  std::string state_file;
  std::size_t samples = 10000;
  double efficiency = 1.0;
  std::uint64_t seed = 1;
  bool include_f = false;
  std::string out = "run";
};

int run_simulate(const CLI::App& cmd, SimulateArgs args) {
  if (!args.config_path.empty()) {
    const json cfg = load_config(args.config_path);
    maybe_set(cmd, "--state", cfg, json::json_pointer("/state/kind"), args.state_kind);
    maybe_set(cmd, "--r", cfg, json::json_pointer("/state/r"), args.r);
    maybe_set(cmd, "--nbar-a", cfg, json::json_pointer("/state/nbar_a"), args.nbar_a);
    maybe_set(cmd, "--nbar-b", cfg, json::json_pointer("/state/nbar_b"), args.nbar_b);
    maybe_set(cmd, "--state-file", cfg, json::json_pointer("/state/file"), args.state_file);
    maybe_set(cmd, "--samples", cfg, json::json_pointer("/samples_per_quadrature"), args.samples);
    maybe_set(cmd, "--efficiency", cfg, json::json_pointer("/efficiency"), args.efficiency);
    maybe_set(cmd, "--seed", cfg, json::json_pointer("/seed"), args.seed);
    maybe_set(cmd, "--include-f", cfg, json::json_pointer("/include_f"), args.include_f);
    maybe_set(cmd, "--out", cfg, json::json_pointer("/out"), args.out);
  }

  covrec::TwoModeGaussianState state = covrec::vacuum_state();
  std::string description;
  if (args.state_kind == "vacuum") {
    description = "vacuum";
  } else if (args.state_kind == "tmss") {
    state = covrec::two_mode_squeezed_state(args.r);
    description = "tmss(r=" + std::to_string(args.r) + ")";
  } else if (args.state_kind == "custom") {
    if (args.state_file.empty()) {
      throw std::invalid_argument("--state custom requires --state-file");
    }
    state = covrec::read_state_json(args.state_file);
    description = "custom(" + args.state_file + ")";
  } else {
    throw std::invalid_argument("unknown state kind '" + args.state_kind + "'");
  }
  if (args.nbar_a > 0.0 || args.nbar_b > 0.0) {
    state = covrec::add_thermal_noise(state, args.nbar_a, args.nbar_b);
    description += "+thermal(" + std::to_string(args.nbar_a) + "," +
                   std::to_string(args.nbar_b) + ")";
  }

  const covrec::HomodyneConfig config{args.samples, args.efficiency, args.seed};
  config.validate();
  const covrec::Schedule schedule = covrec::measurement_schedule(args.include_f);
  const covrec::Dataset dataset = covrec::run_schedule(state, schedule, config, description);

  const std::filesystem::path csv_path = args.out + ".csv";
  const std::filesystem::path meta_path = args.out + ".meta.json";
  covrec::write_dataset_csv(csv_path, dataset);
  covrec::write_dataset_meta(meta_path, dataset);
  std::cout << "wrote " << csv_path.string() << " (" << schedule.size() << " settings x "
            << args.samples << " samples) and " << meta_path.string() << "\n";
  return kExitOk;
}

struct ReconstructArgs {
  std::string config_path;
  std::string data_path;
  std::string meta_path;
  std::string f_policy = "e_only";
  bool correct_efficiency = false;
  bool project = false;
  bool bootstrap = false;
  std::size_t bootstrap_resamples = 200;
  std::string out;
  std::string gnuplot_path;
  bool quiet = false;
};

int run_reconstruct(const CLI::App& cmd, ReconstructArgs args) {
  if (!args.config_path.empty()) {
    const json cfg = load_config(args.config_path);
    maybe_set(cmd, "--f-policy", cfg, json::json_pointer("/f_policy"), args.f_policy);
    maybe_set(cmd, "--correct-efficiency", cfg, json::json_pointer("/correct_efficiency"),
              args.correct_efficiency);
    maybe_set(cmd, "--project-to-physical", cfg, json::json_pointer("/project_to_physical"),
              args.project);
    maybe_set(cmd, "--bootstrap", cfg, json::json_pointer("/bootstrap"), args.bootstrap);
    maybe_set(cmd, "--bootstrap-resamples", cfg, json::json_pointer("/bootstrap_resamples"),
              args.bootstrap_resamples);
    maybe_set(cmd, "--out", cfg, json::json_pointer("/out"), args.out);
  }

  std::optional<std::filesystem::path> meta;
  if (!args.meta_path.empty()) {
    meta = args.meta_path;
  } else {
    std::filesystem::path candidate = args.data_path;
    candidate.replace_extension(".meta.json");
    if (std::filesystem::exists(candidate)) meta = candidate;
  }

  const covrec::Dataset dataset = covrec::read_dataset(args.data_path, meta);

  covrec::ReconstructOptions options;
  if (args.f_policy == "e_only") {
    options.f_policy = covrec::FPolicy::e_only;
  } else if (args.f_policy == "average_ef") {
    options.f_policy = covrec::FPolicy::average_ef;
  } else {
    throw std::invalid_argument("unknown f-policy '" + args.f_policy + "'");
  }
  options.correct_efficiency = args.correct_efficiency;
  options.project = args.project;
  options.bootstrap = args.bootstrap;
  options.bootstrap_resamples = args.bootstrap_resamples;

  const covrec::ReconstructionResult result = covrec::reconstruct_covariance(dataset, options);

  std::filesystem::path out_path = args.out;
  if (args.out.empty()) {
    out_path = args.data_path;
    out_path.replace_extension(".result.json");
  }
  covrec::write_result_json(out_path, result);
  if (!args.gnuplot_path.empty()) {
    std::ofstream table(args.gnuplot_path, std::ios::binary);
    if (!table) {
      throw covrec::io_error("cannot open '" + args.gnuplot_path + "' for writing");
    }
    table << covrec::format_gnuplot_table(result);
  }
  if (!args.quiet) {
    std::cout << covrec::format_report(result);
    std::cout << "wrote " << out_path.string() << "\n";
  }
  return kExitOk;
}

int run_verify(std::size_t trials, std::uint64_t seed) {
  const double max_error = covrec::verify_exact_reconstruction(trials, seed);
  const bool pass = max_error < 1e-10;
  std::printf("max error %.3e over %zu random states, %s\n", max_error, trials,
              pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitVerifyFailed;
}

int run_diagnose(const std::string& path, const std::string& out) {
  std::ifstream in(path);
  if (!in) {
    throw covrec::io_error("cannot open '" + path + "' for reading");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }

  covrec::Mat4 sigma;
  if (j.contains("sigma")) {
    sigma = covrec::matrix_from_json(j["sigma"]);
  } else if (j.contains("cov")) {
    sigma = covrec::matrix_from_json(j["cov"]);
  } else {
    throw std::invalid_argument("'" + path + "' has neither 'sigma' nor 'cov'");
  }

  const covrec::StateDiagnostics d = covrec::diagnose(sigma);
  std::printf("purity:                 %.12g\n", d.purity);
  std::printf("min PPT symplectic eig: %.12g\n", d.min_ppt_symplectic_eig);
  std::printf("log-negativity:         %.12g\n", d.log_negativity);
  std::printf("EPR variance:           %.12g\n", d.epr_variance);
  std::printf("physical:               %s\n", d.physical ? "yes" : "no");
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      throw covrec::io_error("cannot open '" + out + "' for writing");
    }
    f << covrec::diagnostics_to_json(d).dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-mode covariance reconstruction from single-homodyne quadrature data"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "sample a measurement schedule from a Gaussian state");
  simulate->add_option("--config", sim.config_path, "JSON config; flags override its values");
  simulate->add_option("--state", sim.state_kind, "vacuum | tmss | custom")
      ->check(CLI::IsMember({"vacuum", "tmss", "custom"}));
  simulate->add_option("--r", sim.r, "squeezing parameter for tmss");
  simulate->add_option("--nbar-a", sim.nbar_a, "added thermal photons on mode a")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--nbar-b", sim.nbar_b, "added thermal photons on mode b")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--state-file", sim.state_file, "state JSON for --state custom");
  simulate->add_option("--samples", sim.samples, "samples per quadrature")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--efficiency", sim.efficiency, "detection efficiency in (0,1]");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_flag("--include-f", sim.include_f, "measure the redundant f quadratures");
  simulate->add_option("--out", sim.out, "output prefix (<out>.csv, <out>.meta.json)");

  ReconstructArgs rec;
  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "estimate the covariance matrix from a dataset CSV");
  reconstruct->add_option("data", rec.data_path, "dataset CSV")->required();
  reconstruct->add_option("--config", rec.config_path, "JSON config; flags override its values");
  reconstruct->add_option("--meta", rec.meta_path,
                          "metadata sidecar (default: <data>.meta.json when present)");
  reconstruct->add_option("--f-policy", rec.f_policy, "e_only | average_ef")
      ->check(CLI::IsMember({"e_only", "average_ef"}));
  reconstruct->add_flag("--correct-efficiency", rec.correct_efficiency,
                        "invert the detection-loss model using the metadata efficiency");
  reconstruct->add_flag("--project-to-physical", rec.project,
                        "also report the physically projected estimate");
  reconstruct->add_flag("--bootstrap", rec.bootstrap, "percentile-bootstrap errors");
  reconstruct->add_option("--bootstrap-resamples", rec.bootstrap_resamples, "default 200");
  reconstruct->add_option("--out", rec.out, "result JSON path (default <data>.result.json)");
  reconstruct->add_option("--emit-gnuplot", rec.gnuplot_path,
                          "write a whitespace-delimited sigma/stderr table");
  reconstruct->add_flag("--quiet", rec.quiet, "suppress the report table");

  std::size_t verify_trials = 100;
  std::uint64_t verify_seed = 1;
  CLI::App* verify = app.add_subcommand(
      "verify", "exactness check: random states -> analytic moments -> reconstruction");
  verify->add_option("--trials", verify_trials, "number of random states")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "RNG seed");

  std::string diag_path;
  std::string diag_out;
  CLI::App* diagnose = app.add_subcommand(
      "diagnose", "Gaussian diagnostics for a state or result JSON");
  diagnose->add_option("file", diag_path, "state JSON ('cov') or result JSON ('sigma')")
      ->required();
  diagnose->add_option("--out", diag_out, "also write diagnostics JSON here");

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return run_simulate(*simulate, sim);
    if (reconstruct->parsed()) return run_reconstruct(*reconstruct, rec);
    if (verify->parsed()) return run_verify(verify_trials, verify_seed);
    if (diagnose->parsed()) return run_diagnose(diag_path, diag_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const covrec::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
