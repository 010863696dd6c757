// Command-line front end: simulate photon registrations under dead time,
// fit Gaussian-uniform mixtures to them, score fits against averaged
// histograms, and aggregate benchmark tables.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "spadfit/config.hpp"
#include "spadfit/em.hpp"
#include "spadfit/errors.hpp"
#include "spadfit/evaluate.hpp"
#include "spadfit/histogram.hpp"
#include "spadfit/io.hpp"
#include "spadfit/padding.hpp"

namespace fs = std::filesystem;
using namespace spadfit;

namespace {

std::string replication_stem(int replication) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", replication);
  return buf;
}

void apply_set_overrides(ScenarioConfig& config,
                         const std::vector<std::string>& overrides) {
  for (const std::string& entry : overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + entry + "'");
    }
    apply_override(config, entry.substr(0, eq), entry.substr(eq + 1));
  }
}

struct SimulateArgs {
  std::string config_path;
  std::string scenario;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "text";
  int threads = 0;
};

int cmd_simulate(const SimulateArgs& args) {
  ScenarioConfig config;
  if (!args.config_path.empty()) {
    config = load_config(args.config_path);
  } else if (!args.scenario.empty()) {
    config = scenario_preset(args.scenario);
  } else {
    throw ConfigError("simulate needs --config or --scenario");
  }
  apply_set_overrides(config, args.overrides);
  config.rng_seed = args.seed;
  config.validate();

  const TimestampFormat format = args.format == "binary"
                                     ? TimestampFormat::binary
                                     : TimestampFormat::text;
  if (args.format != "binary" && args.format != "text") {
    throw ConfigError("--format must be text or binary");
  }

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);

  const ScenarioData data = simulate_scenario(config, args.threads);
  const Provenance provenance{config_hash(config), config.rng_seed};

  save_config(config, out_dir / "config.txt");
  std::vector<std::string> files = {"config.txt"};

  const std::string extension = format == TimestampFormat::binary ? ".bin" : ".txt";
  const std::size_t replications = data.replication_histograms.size();
  for (std::size_t rep = 0; rep < replications; ++rep) {
    const std::string stem = replication_stem(static_cast<int>(rep));
    const std::string ts_name = "timestamps_r" + stem + extension;
    write_timestamps(out_dir / ts_name, data.replication_timestamps[rep],
                     format, provenance);
    files.push_back(ts_name);
    const std::string hist_name = "histogram_r" + stem + ".txt";
    write_histogram(out_dir / hist_name, data.replication_histograms[rep],
                    provenance);
    files.push_back(hist_name);
  }
  write_histogram(out_dir / "histogram_avg.txt", data.averaged_histogram,
                  provenance);
  files.push_back("histogram_avg.txt");

  {
    std::ofstream manifest(out_dir / "manifest.txt", std::ios::binary);
    if (!manifest) throw IoError("cannot write manifest");
    manifest << "# simulation manifest v1\n"
             << "# config_hash = 0x" << std::hex << provenance.config_hash
             << std::dec << '\n'
             << "# seed = " << provenance.seed << '\n'
             << "format = " << args.format << '\n';
    for (const std::string& f : files) manifest << "file = " << f << '\n';
  }

  std::cout << "simulated " << replications << " replications, "
            << data.pooled_timestamps.size() << " registrations total\n"
            << "wrote " << files.size() + 1 << " files under " << out_dir.string()
            << '\n';
  return 0;
}

struct FitArgs {
  std::vector<std::string> timestamp_files;
  std::string in_dir;
  std::string histogram_path;
  int gaussians = 3;
  std::string model = "gmm";
  bool padded = false;
  double forced_offset = -1.0;
  int em_iters = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
};

std::vector<fs::path> discover_timestamp_files(const fs::path& dir) {
  std::vector<fs::path> files;
  const fs::path manifest_path = dir / "manifest.txt";
  if (fs::exists(manifest_path)) {
    std::ifstream manifest(manifest_path);
    std::string line;
    while (std::getline(manifest, line)) {
      if (line.rfind("file = timestamps_", 0) == 0) {
        files.push_back(dir / line.substr(7));
      }
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("timestamps_", 0) == 0) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  }
  if (files.empty()) {
    throw IoError("no timestamp files found under " + dir.string());
  }
  return files;
}

int cmd_fit(const FitArgs& args) {
  std::vector<fs::path> inputs;
  for (const std::string& f : args.timestamp_files) inputs.emplace_back(f);
  if (!args.in_dir.empty()) {
    const auto discovered = discover_timestamp_files(args.in_dir);
    inputs.insert(inputs.end(), discovered.begin(), discovered.end());
  }
  if (inputs.empty()) {
    throw ConfigError("fit needs --timestamps files or --in directory");
  }

  TimestampSet pooled;
  Provenance provenance;
  bool first = true;
  for (const fs::path& file : inputs) {
    Provenance file_provenance;
    const TimestampSet set = read_timestamps(file, &file_provenance);
    if (set.frame != Frame::relative) {
      throw FrameError(file.string() + ": expected relative timestamps");
    }
    if (first) {
      pooled.frame = Frame::relative;
      pooled.cycle_length = set.cycle_length;
      provenance = file_provenance;
      first = false;
    } else {
      if (set.cycle_length != pooled.cycle_length) {
        throw FrameError(file.string() + ": cycle_length differs from the first input");
      }
      if (file_provenance.config_hash != provenance.config_hash) {
        throw IoError(file.string() + ": config hash differs from the first input");
      }
    }
    pooled.values.insert(pooled.values.end(), set.values.begin(),
                         set.values.end());
  }
  std::sort(pooled.values.begin(), pooled.values.end());

  PaddingPlan plan{0.0, pooled.cycle_length};
  if (args.padded) {
    if (args.forced_offset >= 0.0) {
      plan.offset = args.forced_offset;
    } else {
      fs::path hist_path(args.histogram_path);
      if (hist_path.empty() && !args.in_dir.empty()) {
        hist_path = fs::path(args.in_dir) / "histogram_avg.txt";
      }
      if (hist_path.empty() || !fs::exists(hist_path)) {
        throw ConfigError(
            "--padded needs --offset, --histogram, or an --in directory "
            "containing histogram_avg.txt");
      }
      plan = select_offset(read_histogram(hist_path));
    }
  }

  const ModelKind model_kind = parse_model_kind(args.model);
  const TimestampSet em_input =
      args.padded ? wrap_shift(pooled, plan) : pooled;

  FitOptions options;
  options.max_iters =
      args.em_iters > 0 ? args.em_iters : default_em_iters(args.gaussians);
  options.restarts = args.restarts;
  RandomStream restart_rng(args.seed, StreamDomain::restarts);
  FitResult result = fit(em_input, args.gaussians,
                         model_kind == ModelKind::gumm, options,
                         args.restarts > 0 ? &restart_rng : nullptr);
  result.padding_offset = plan.offset;

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_fit_result(out_dir / "fit_result.txt", result, model_kind, provenance);
  save_params(out_dir / "params.txt", result.params, provenance);

  std::cout << "fitted " << args.gaussians << "-component "
            << model_kind_name(model_kind) << " on " << pooled.size()
            << " timestamps: loglik " << format_double(result.loglik_trace.back())
            << (result.converged ? " (converged)" : "") << '\n';
  return 0;
}

struct EvalArgs {
  std::string fit_path;
  std::string histogram_path;
  std::string config_path;
  std::string name = "scenario";
  std::string out_dir;
};

int cmd_eval(const EvalArgs& args) {
  const StoredFitResult stored = read_fit_result(args.fit_path);
  const Histogram hist = read_histogram(args.histogram_path);

  fs::path config_path(args.config_path);
  if (config_path.empty()) {
    const fs::path sibling =
        fs::path(args.histogram_path).parent_path() / "config.txt";
    if (fs::exists(sibling)) config_path = sibling;
  }
  if (config_path.empty()) {
    throw ConfigError("eval needs --config (or a config.txt next to the histogram)");
  }
  const ScenarioConfig config = load_config(config_path);

  const PaddingPlan plan{stored.fit.padding_offset, hist.cycle_length};
  ScenarioReport report;
  report.scenario_name = args.name;
  report.config = config;
  report.model_kind = stored.model_kind;
  report.num_gaussians = static_cast<int>(stored.fit.params.num_gaussians());
  report.padded = stored.fit.padding_offset != 0.0;
  report.mse = mse(stored.fit.params, plan, hist);
  report.fit = stored.fit;
  report.histogram = hist;

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_scenario_report(out_dir / "scenario_report.txt", report);
  write_plot_data(out_dir / "plot_data.txt", hist, stored.fit.params, plan,
                  stored.provenance);

  std::cout << args.name << " mse = " << format_double(report.mse) << '\n';
  return 0;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
};

int cmd_report(const ReportArgs& args) {
  std::vector<ScenarioReport> reports;
  for (const std::string& input : args.inputs) {
    const fs::path path(input);
    if (fs::is_directory(path)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.path().filename() == "scenario_report.txt") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      for (const fs::path& f : found) {
        reports.push_back(read_scenario_report(f));
      }
    } else {
      reports.push_back(read_scenario_report(path));
    }
  }
  if (reports.empty()) throw IoError("report: no scenario reports found");

  const std::string table = render_report_table(reports);
  std::cout << table;
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    std::ofstream out(fs::path(args.out_dir) / "table.txt", std::ios::binary);
    if (!out) throw IoError("cannot write table.txt");
    out << "# aggregated benchmark table v1\n";
    for (const ScenarioReport& r : reports) {
      out << "# input config_hash = 0x" << std::hex << config_hash(r.config)
          << std::dec << " seed = " << r.config.rng_seed << '\n';
    }
    out << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Photon-registration simulation under detector dead time and "
      "Gaussian-uniform mixture estimation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Generate registration timestamps and histograms");
  simulate_cmd->add_option("--config", sim.config_path,
                           "Flat key=value config file");
  simulate_cmd->add_option("--scenario", sim.scenario,
                           "Built-in scenario: single_pulse, high_noise, "
                           "bump, bump_noise");
  simulate_cmd->add_option("--set", sim.overrides,
                           "Override a config key, e.g. --set num_cycles=100");
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed (required)")
      ->required();
  simulate_cmd->add_option("--out", sim.out_dir, "Output directory")
      ->required();
  simulate_cmd->add_option("--format", sim.format,
                           "Timestamp file format: text or binary");
  simulate_cmd->add_option("--threads", sim.threads,
                           "Worker cap; 0 = hardware (results identical)");

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Pool timestamp files and fit a mixture by EM");
  fit_cmd->add_option("--timestamps", fit_args.timestamp_files,
                      "Timestamp files to pool");
  fit_cmd->add_option("--in", fit_args.in_dir,
                      "Simulation output directory to read");
  fit_cmd->add_option("--histogram", fit_args.histogram_path,
                      "Histogram used for automatic cut selection");
  fit_cmd->add_option("--gaussians", fit_args.gaussians,
                      "Number of Gaussian components")
      ->required();
  fit_cmd->add_option("--model", fit_args.model, "gmm or gumm")->required();
  fit_cmd->add_flag("--padded", fit_args.padded,
                    "Cyclically re-cut the period before fitting");
  fit_cmd->add_option("--offset", fit_args.forced_offset,
                      "Force the cut offset instead of selecting it");
  fit_cmd->add_option("--em-iters", fit_args.em_iters,
                      "Iteration budget; 0 = default for the model order");
  fit_cmd->add_option("--restarts", fit_args.restarts,
                      "Extra random restarts (best likelihood wins)");
  fit_cmd->add_option("--seed", fit_args.seed, "Seed for restarts");
  fit_cmd->add_option("--out", fit_args.out_dir, "Output directory")
      ->required();

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Score a fit against an averaged histogram");
  eval_cmd->add_option("--fit", eval_args.fit_path, "fit_result.txt path")
      ->required();
  eval_cmd->add_option("--histogram", eval_args.histogram_path,
                       "Averaged histogram path")
      ->required();
  eval_cmd->add_option("--config", eval_args.config_path,
                       "Config file (defaults to config.txt next to the histogram)");
  eval_cmd->add_option("--name", eval_args.name, "Scenario label");
  eval_cmd->add_option("--out", eval_args.out_dir, "Output directory")
      ->required();

  ReportArgs report_args;
  CLI::App* report_cmd = app.add_subcommand(
      "report", "Aggregate scenario reports into an MSE table");
  report_cmd->add_option("inputs", report_args.inputs,
                         "scenario_report.txt files or directories")
      ->required();
  report_cmd->add_option("--out", report_args.out_dir,
                         "Directory for table.txt");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(sim);
    if (fit_cmd->parsed()) return cmd_fit(fit_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (report_cmd->parsed()) return cmd_report(report_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
