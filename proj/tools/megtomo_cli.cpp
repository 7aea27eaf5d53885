#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "megtomo/benchmark.hpp"
#include "megtomo/config.hpp"
#include "megtomo/io.hpp"

namespace fs = std::filesystem;
using namespace megtomo;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "Path to a JSON scenario config");
  cmd->add_option("--preset", o.preset, "Named preset from the presets directory");
  cmd->add_option("--out", o.out_dir, "Output directory")->required();
  cmd->add_option("--set", o.overrides, "Dotted-path override, e.g. noise.signal_rate=1e6");
  cmd->add_option("--seed", o.seed, "Master seed override");
  cmd->add_option("--jobs", o.jobs, "Worker thread cap")->check(CLI::PositiveNumber);
}

std::pair<ScenarioConfig, nlohmann::json> load_scenario(CommonOpts& o) {
  if (o.config_path.empty() == o.preset.empty()) {
    throw ConfigError("exactly one of --config or --preset is required");
  }
  const std::string path = o.preset.empty() ? o.config_path : resolve_preset(o.preset);
  nlohmann::json raw = load_config_json(path);
  if (o.seed_given) raw["master_seed"] = o.seed;
  for (const auto& assignment : o.overrides) apply_override(raw, assignment);
  ScenarioConfig cfg = scenario_config_from_json(raw);
  return {cfg, scenario_config_to_json(cfg)};
}

void report_failures(const std::vector<RunFailure>& failures) {
  for (const auto& f : failures) {
    std::cerr << "run (state " << f.state_index << ", repeat " << f.repeat_index
              << ") failed: " << f.message << "\n";
  }
}

int cmd_track(CommonOpts& o, const std::string& command) {
  auto [cfg, echo] = load_scenario(o);
  ScenarioConfig single = cfg;
  single.n_states = 1;
  single.n_noise_repeats = 1;
  EnsembleResult ens = run_ensemble(single, 1);
  if (ens.traces.empty()) {
    report_failures(ens.failures);
    return 1;
  }
  const TrackTrace& trace = ens.traces.front();

  fs::create_directories(o.out_dir);
  write_trace_csv(trace, o.out_dir + "/trace.csv");
  write_counts_csv(trace, o.out_dir + "/counts.csv");
  write_json(trace_json(trace, echo), o.out_dir + "/trace.json");
  write_manifest(o.out_dir, command, echo, cfg.master_seed,
                 {"trace.csv", "counts.csv", "trace.json"});
  return 0;
}

int cmd_bench(CommonOpts& o, const std::string& command) {
  auto [cfg, echo] = load_scenario(o);
  EnsembleResult ens = run_ensemble(cfg, o.jobs);
  report_failures(ens.failures);
  if (ens.traces.empty()) return 1;

  fs::create_directories(o.out_dir + "/traces");
  std::vector<std::string> outputs;
  for (const auto& trace : ens.traces) {
    char name[48];
    std::snprintf(name, sizeof(name), "traces/trace_s%03d_r%03d.csv", trace.state_index,
                  trace.repeat_index);
    write_trace_csv(trace, o.out_dir + "/" + name);
    outputs.emplace_back(name);
  }
  const AggregateStats stats = aggregate(ens.traces, cfg.threshold, cfg.burn_in);
  write_aggregate_csv(stats, o.out_dir + "/aggregate.csv");
  write_json(summary_json(echo, stats, ens.failures), o.out_dir + "/summary.json");
  outputs.emplace_back("aggregate.csv");
  outputs.emplace_back("summary.json");
  write_manifest(o.out_dir, command, echo, cfg.master_seed, outputs);
  return ens.failures.empty() ? 0 : 1;
}

int cmd_sweep(CommonOpts& o, const std::string& levels_arg, const std::string& command) {
  auto [cfg, echo] = load_scenario(o);

  std::vector<double> levels;
  std::size_t start = 0;
  while (start <= levels_arg.size()) {
    const auto comma = levels_arg.find(',', start);
    const std::string token =
        levels_arg.substr(start, comma == std::string::npos ? comma : comma - start);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw ConfigError("invalid noise level \"" + token + "\"");
    }
    if (used != token.size()) throw ConfigError("invalid noise level \"" + token + "\"");
    levels.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (levels.empty()) throw ConfigError("--levels must list at least one value");

  const std::vector<SweepPoint> points = noise_sweep(cfg, levels, o.jobs);

  fs::create_directories(o.out_dir);
  std::vector<std::string> outputs;
  bool any_failure = false;
  for (const auto& point : points) {
    report_failures(point.failures);
    any_failure = any_failure || !point.failures.empty();
    const std::string name = "aggregate_level_" + format_g12(point.level) + ".csv";
    write_aggregate_csv(point.stats, o.out_dir + "/" + name, point.snr);
    outputs.push_back(name);
  }
  write_json(sweep_summary_json(echo, points), o.out_dir + "/sweep_summary.json");
  outputs.emplace_back("sweep_summary.json");
  write_manifest(o.out_dir, command, echo, cfg.master_seed, outputs);
  return any_failure ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MEG online quantum state tomography toolkit"};
  app.require_subcommand(1);

  CommonOpts track_opts, bench_opts, sweep_opts;
  std::string levels_arg;

  CLI::App* track_cmd = app.add_subcommand("track", "Run a single tracking trace");
  add_common(track_cmd, track_opts);
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a full benchmark ensemble");
  add_common(bench_cmd, bench_opts);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a background-noise sweep");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--levels", levels_arg, "Comma-separated extra background rates")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  track_opts.seed_given = track_cmd->count("--seed") > 0;
  bench_opts.seed_given = bench_cmd->count("--seed") > 0;
  sweep_opts.seed_given = sweep_cmd->count("--seed") > 0;

  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) command += ' ';
    command += argv[i];
  }

  try {
    if (track_cmd->parsed()) return cmd_track(track_opts, command);
    if (bench_cmd->parsed()) return cmd_bench(bench_opts, command);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, levels_arg, command);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const EstimatorError& e) {
    std::cerr << "error at iteration " << e.iteration() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
