// planmerge: run plan-merging experiments and aggregate their CSV output.
//
//   planmerge run --preset exp1 --method all --seeds 30 --out results/
//   planmerge aggregate --in results/ --out results/agg.csv

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "planmerge/config.hpp"
#include "planmerge/metrics.hpp"
#include "planmerge/simulation.hpp"

namespace fs = std::filesystem;
using namespace planmerge;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct RunOptions {
  std::string preset;
  std::string config_file;
  std::string method = "all";
  std::optional<int> seeds;
  std::optional<std::uint64_t> master_seed;
  bool no_noise = false;
  int jobs = 0;
  std::string out_dir;
};

struct AggregateOptions {
  std::string in_dir;
  std::string out_file;
};

int do_run(const RunOptions& opts) {
  SimConfig config = preset(opts.preset);
  if (!opts.config_file.empty()) apply_config_file(config, opts.config_file);
  if (opts.seeds) config.num_seeds = *opts.seeds;
  if (opts.master_seed) config.master_seed = *opts.master_seed;
  if (opts.no_noise) config.zero_noise = true;

  std::vector<MergeMethod> methods;
  if (opts.method == "all") {
    methods = {MergeMethod::kOwnHistory, MergeMethod::kBestPlan, MergeMethod::kStepVote,
               MergeMethod::kBestWithVote};
  } else {
    methods = {parse_merge_method(opts.method)};
  }
  config.validate();

  fs::create_directories(opts.out_dir);
  std::vector<MetricsRecord> all;
  for (MergeMethod m : methods) {
    const auto records = run_batch(config, m, opts.jobs);
    const auto path = fs::path(opts.out_dir) /
                      ("raw_" + opts.preset + "_" + std::to_string(static_cast<int>(m)) + ".csv");
    write_csv(records, path);
    std::cout << "wrote " << path.string() << " (" << records.size() << " rows)\n";
    all.insert(all.end(), records.begin(), records.end());
  }
  const auto table = aggregate(all);
  const auto agg_path = fs::path(opts.out_dir) / ("agg_" + opts.preset + ".csv");
  write_csv(table, agg_path);
  std::cout << "wrote " << agg_path.string() << '\n';
  return 0;
}

int do_aggregate(const AggregateOptions& opts) {
  if (!fs::is_directory(opts.in_dir)) throw IoError("not a directory: " + opts.in_dir);
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(opts.in_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("raw_") && name.ends_with(".csv")) {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) throw IoError("no raw_*.csv files in " + opts.in_dir);

  std::vector<MetricsRecord> all;
  for (const auto& path : inputs) {
    const auto records = read_records_csv(path);
    all.insert(all.end(), records.begin(), records.end());
  }
  write_csv(aggregate(all), opts.out_file);
  std::cout << "aggregated " << all.size() << " rows from " << inputs.size() << " files into "
            << opts.out_file << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan merging with reputation-weighted recommendations"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run an experiment preset and write raw and aggregate CSVs");
  run->add_option("--preset", run_opts.preset, "Experiment preset")
      ->required()
      ->check(CLI::IsMember({"exp1", "exp2", "exp3"}));
  run->add_option("--config", run_opts.config_file, "key=value file overriding preset fields")
      ->check(CLI::ExistingFile);
  run->add_option("--method", run_opts.method, "Merge method 0-3 or 'all'")
      ->check(CLI::IsMember({"0", "1", "2", "3", "all"}));
  run->add_option("--seeds", run_opts.seeds, "Number of seeds in the batch")
      ->check(CLI::PositiveNumber);
  run->add_option("--master-seed", run_opts.master_seed, "First seed of the batch");
  run->add_flag("--no-noise", run_opts.no_noise, "Perceive plan errors without noise");
  run->add_option("--jobs", run_opts.jobs, "Worker threads (0 = all cores)");
  run->add_option("--out", run_opts.out_dir, "Output directory")->required();

  AggregateOptions agg_opts;
  auto* agg = app.add_subcommand("aggregate", "Aggregate raw_*.csv files from a directory");
  agg->add_option("--in", agg_opts.in_dir, "Directory with raw CSVs")->required();
  agg->add_option("--out", agg_opts.out_file, "Aggregate CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (run->parsed()) return do_run(run_opts);
    return do_aggregate(agg_opts);
  } catch (const ConfigError& e) {
    std::cerr << "planmerge: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "planmerge: " << e.what() << '\n';
    return kRuntimeError;
  }
}
