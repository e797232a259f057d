// tvopt: run decentralized optimization experiments over time-varying graphs.
//
//   tvopt run <config.json>
//   tvopt bounds <name> [key=value ...]
//   tvopt graph-info <schedule.json>
//   tvopt sweep <config.json> --seeds 1,2,3 --periods 5,200 [--pair star,cycle]
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tvopt/error.hpp"
#include "tvopt/experiment.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::map<std::string, double> parse_pairs(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw tvopt::ValidationError("expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      out[key] = v;
    } catch (const std::logic_error&) {
      throw tvopt::ValidationError("value for '" + key + "' is not a number: '" + text + "'");
    }
  }
  return out;
}

int cmd_run(const std::string& config_path) {
  const tvopt::ExperimentConfig config = tvopt::load_config(config_path);
  const tvopt::ExperimentResult result = tvopt::execute(config);
  for (const auto& w : result.summary["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
  for (const auto& f : result.files) std::cout << f.string() << '\n';
  return 0;
}

int cmd_bounds(const std::string& name, const std::vector<std::string>& pairs) {
  const tvopt::BoundReport report = tvopt::evaluate_bound(name, parse_pairs(pairs));
  std::cout << tvopt::format_report(report);
  return 0;
}

int cmd_graph_info(const std::string& path) {
  const tvopt::ScheduleSpec spec = tvopt::load_schedule(path);
  const int n = tvopt::declared_node_count(spec);
  if (n == 0) throw tvopt::ValidationError("schedule: set n to size generated topologies");
  int horizon = 1;
  for (const auto& e : spec.epochs) horizon = std::max(horizon, e.start + 1);
  if (spec.alternate_first) horizon = std::max(horizon, 2 * spec.period);
  const tvopt::GraphSchedule s = tvopt::build_schedule(spec, n, horizon, 0);
  const tvopt::Json info = tvopt::graph_info(s);
  std::printf("horizon %d, n %d\n", info["horizon"].get<int>(), info["n"].get<int>());
  for (const auto& e : info["epochs"]) {
    std::printf("epoch %d start %d edges %d: lambda_max %.10g lambda_min_pos %.10g chi %.10g\n",
                e["index"].get<int>(), e["start"].get<int>(), e["edges"].get<int>(),
                e["lambda_max"].get<double>(), e["lambda_min_pos"].get<double>(), e["chi"].get<double>());
  }
  std::printf("theta_max %.10g theta_min %.10g m %d alpha %.10g\n", info["theta_max"].get<double>(),
              info["theta_min"].get<double>(), info["m"].get<int>(), info["alpha"].get<double>());
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::uint64_t>& seeds,
              const std::vector<int>& periods, const std::string& pair) {
  const tvopt::ExperimentConfig config = tvopt::load_config(config_path);
  const auto comma = pair.find(',');
  if (comma == std::string::npos) throw tvopt::ValidationError("--pair expects two kinds, e.g. star,cycle");
  const auto first = tvopt::parse_topology_kind(pair.substr(0, comma));
  const auto second = tvopt::parse_topology_kind(pair.substr(comma + 1));
  const tvopt::SweepResult result = tvopt::sweep(config, seeds, periods, first, second);

  std::filesystem::create_directories(config.output_dir);
  const auto path = config.output_dir / (config.run_id + "_sweep.csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tvopt::IoError("cannot open " + path.string() + " for writing");
  tvopt::write_sweep_csv(result, out);
  if (!out) throw tvopt::IoError("write failed for " + path.string());

  std::printf("%-8s %-10s %s\n", "period", "algorithm", "median_final_dual_residual");
  for (const auto& [key, value] : result.median_residual) {
    std::printf("%-8d %-10s %.6e\n", key.first, key.second.c_str(), value);
  }
  std::cout << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized optimization over time-varying graphs"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();

  std::string bound_name;
  std::vector<std::string> bound_args;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a closed-form bound or rate");
  bounds->add_option("name", bound_name, "thm2, cor1, thm3, thm5, cor2, prop1, prop2, prop3")->required();
  bounds->add_option("constants", bound_args, "key=value pairs");

  std::string schedule_path;
  auto* info = app.add_subcommand("graph-info", "Print spectral data of a schedule");
  info->add_option("schedule", schedule_path, "Schedule file (JSON)")->required();

  std::string sweep_config;
  std::vector<std::uint64_t> seeds;
  std::vector<int> periods;
  std::string pair = "complete,path";
  auto* sw = app.add_subcommand("sweep", "Run a config over seeds and switching periods");
  sw->add_option("config", sweep_config, "Experiment config (JSON)")->required();
  sw->add_option("--seeds", seeds, "Root seeds")->delimiter(',')->required();
  sw->add_option("--periods", periods, "Switching periods")->delimiter(',')->required();
  sw->add_option("--pair", pair, "Alternated topology kinds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (bounds->parsed()) return cmd_bounds(bound_name, bound_args);
    if (info->parsed()) return cmd_graph_info(schedule_path);
    if (sw->parsed()) return cmd_sweep(sweep_config, seeds, periods, pair);
  } catch (const tvopt::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
