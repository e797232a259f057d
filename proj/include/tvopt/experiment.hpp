#pragma once

// Experiment configuration, execution, bound reporting and sweeps behind the CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tvopt/algorithms.hpp"
#include "tvopt/graphs.hpp"
#include "tvopt/metrics.hpp"
#include "tvopt/objectives.hpp"
#include "tvopt/theory.hpp"

namespace tvopt {

using Json = nlohmann::json;

struct ObjectiveSpec {
  std::string kind = "ridge";  // ridge | logistic | logistic_file | quadratic
  int n = 20;
  int l = 20;
  int m = 10;
  double c = 0.1;
  double noise = 0.1;
  std::filesystem::path path;  // logistic_file
  std::vector<Vector> centers; // quadratic: phi_i = 1/2 ||y - a_i||^2
  bool balance = false;        // balance_strong_convexity
};

struct EpochSpec {
  int start = 0;
  int n = 0;                   // 0: inherit
  std::optional<TopologyKind> kind;
  std::vector<Edge> edges;     // used when kind is absent; 0-based here, 1-based in files
  TopologyParams params;
  std::optional<std::uint64_t> seed;
};

struct ScheduleSpec {
  std::optional<int> horizon;  // defaults to max_iter
  int n = 0;                   // 0: take the objective's agent count
  std::vector<EpochSpec> epochs;
  // Alternation shorthand: first/second kinds swapped every `period` iterations.
  std::optional<TopologyKind> alternate_first;
  std::optional<TopologyKind> alternate_second;
  int period = 0;
};

struct ExperimentConfig {
  std::string run_id = "run";
  std::uint64_t seed = 0;
  ObjectiveSpec objective;
  ScheduleSpec schedule;
  std::vector<Method> algorithms;
  int max_iter = 100;
  int record_every = 1;
  std::filesystem::path output_dir = ".";
  std::optional<double> diging_stepsize;
  std::vector<TraceFormat> formats{TraceFormat::kCsv};
};

/// Relative paths (dataset, schedule_file, output_dir) resolve against base_dir.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);
ScheduleSpec parse_schedule(const Json& j);
/// Node count declared by a schedule (top-level n, an epoch n, or the largest edge endpoint); 0 if none.
int declared_node_count(const ScheduleSpec& spec);
ScheduleSpec load_schedule(const std::filesystem::path& path);

/// Graph seeds default to derive_seed(root, kGraph, epoch index).
GraphSchedule build_schedule(const ScheduleSpec& spec, int n, int default_horizon,
                             std::uint64_t root_seed);
/// Data seeds are derive_seed(root, kData).
AggregateObjective build_objective(const ObjectiveSpec& spec, std::uint64_t root_seed);

struct AlgorithmResult {
  Method method = Method::kNesterov;
  RunTrace trace;
  std::vector<MetricRow> rows;
};

struct ExperimentResult {
  Json summary;
  std::vector<AlgorithmResult> results;
  std::vector<std::filesystem::path> files;
};

/// Runs every configured algorithm, writes `<run_id>_<algorithm>.<fmt>` traces and
/// `<run_id>_summary.json` when write_files is set.
ExperimentResult execute(const ExperimentConfig& config, bool write_files = true);

/// Per-epoch spectra plus schedule-level theta bounds and change statistics.
Json graph_info(const GraphSchedule& s);

struct SweepRow {
  std::uint64_t seed = 0;
  int period = 0;
  Method method = Method::kNesterov;
  double dual_residual = 0.0;
  double primal_gap = 0.0;
  double consensus_dist = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // (period, algorithm) -> median final dual residual over seeds
  std::map<std::pair<int, std::string>, double> median_residual;
};

/// For each (seed, period) runs the config on an alternating schedule of the two kinds.
SweepResult sweep(const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
                  const std::vector<int>& periods, TopologyKind first, TopologyKind second);

void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// Bound names: thm2, cor1, thm3, thm5, cor2, prop1, prop2, prop3.
BoundReport evaluate_bound(const std::string& name, const std::map<std::string, double>& args);
std::string format_report(const BoundReport& report);

double median(std::vector<double> values);

}  // namespace tvopt
