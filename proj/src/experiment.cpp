#include "tvopt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "tvopt/error.hpp"
#include "tvopt/random.hpp"

namespace tvopt {

namespace fs = std::filesystem;

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T get(const Json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return get<T>(j, key, where);
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

TopologyParams parse_params(const Json& j, const std::string& where) {
  reject_unknown(j, {"p", "radius"}, where);
  TopologyParams p;
  if (j.contains("p")) p.p = get<double>(j, "p", where);
  if (j.contains("radius")) p.radius = get<double>(j, "radius", where);
  return p;
}

ObjectiveSpec parse_objective(const Json& j, const fs::path& base_dir) {
  const std::string where = "objective";
  reject_unknown(j, {"kind", "n", "l", "m", "c", "noise", "path", "centers", "balance"}, where);
  ObjectiveSpec o;
  o.kind = get_or<std::string>(j, "kind", o.kind, where);
  o.n = get_or<int>(j, "n", o.n, where);
  o.l = get_or<int>(j, "l", o.l, where);
  o.m = get_or<int>(j, "m", o.m, where);
  o.c = get_or<double>(j, "c", o.c, where);
  o.noise = get_or<double>(j, "noise", o.noise, where);
  o.balance = get_or<bool>(j, "balance", o.balance, where);
  if (o.kind == "logistic_file") {
    o.path = get<std::string>(j, "path", where);
    if (o.path.is_relative()) o.path = base_dir / o.path;
    if (!fs::exists(o.path)) throw ValidationError("objective.path: " + o.path.string() + " does not exist");
  } else if (o.kind == "quadratic") {
    const auto centers = get<std::vector<std::vector<double>>>(j, "centers", where);
    if (centers.empty()) throw ValidationError("objective.centers: need at least one agent");
    for (const auto& c : centers) {
      if (c.empty() || c.size() != centers.front().size()) {
        throw ValidationError("objective.centers: rows must be nonempty and of equal length");
      }
      o.centers.push_back(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
    }
    o.n = static_cast<int>(centers.size());
  } else if (o.kind != "ridge" && o.kind != "logistic") {
    throw ValidationError("objective.kind: unknown '" + o.kind +
                          "' (valid: ridge, logistic, logistic_file, quadratic)");
  }
  if (o.n < 1 || o.l < 1 || o.m < 1) throw ValidationError("objective: n, l, m must be >= 1");
  return o;
}

}  // namespace

ScheduleSpec parse_schedule(const Json& j) {
  const std::string where = "schedule";
  reject_unknown(j, {"horizon", "n", "epochs", "alternate"}, where);
  ScheduleSpec s;
  if (j.contains("horizon")) s.horizon = get<int>(j, "horizon", where);
  s.n = get_or<int>(j, "n", 0, where);
  if (j.contains("alternate")) {
    const Json& a = j.at("alternate");
    reject_unknown(a, {"first", "second", "period"}, "schedule.alternate");
    s.alternate_first = parse_topology_kind(get<std::string>(a, "first", "schedule.alternate"));
    s.alternate_second = parse_topology_kind(get<std::string>(a, "second", "schedule.alternate"));
    s.period = get<int>(a, "period", "schedule.alternate");
    if (s.period < 1) throw ValidationError("schedule.alternate.period must be >= 1");
    if (j.contains("epochs")) throw ValidationError("schedule: give either epochs or alternate");
    return s;
  }
  if (!j.contains("epochs") || !j.at("epochs").is_array() || j.at("epochs").empty()) {
    throw ValidationError("schedule.epochs: need a nonempty array");
  }
  int index = 0;
  for (const Json& e : j.at("epochs")) {
    const std::string ew = "schedule.epochs[" + std::to_string(index++) + "]";
    reject_unknown(e, {"start", "n", "kind", "edges", "params", "seed"}, ew);
    EpochSpec spec;
    spec.start = get<int>(e, "start", ew);
    spec.n = get_or<int>(e, "n", 0, ew);
    if (e.contains("kind")) spec.kind = parse_topology_kind(get<std::string>(e, "kind", ew));
    if (e.contains("edges")) {
      for (const auto& pair : get<std::vector<std::vector<double>>>(e, "edges", ew)) {
        if (pair.size() != 2 && pair.size() != 3) {
          throw ValidationError(ew + ".edges: entries are [u, v] or [u, v, weight]");
        }
        if (pair[0] < 1 || pair[1] < 1 || pair[0] != std::floor(pair[0]) || pair[1] != std::floor(pair[1])) {
          throw ValidationError(ew + ".edges: node indices are integers starting at 1");
        }
        spec.edges.push_back({static_cast<int>(pair[0]) - 1, static_cast<int>(pair[1]) - 1,
                              pair.size() == 3 ? pair[2] : 1.0});
      }
    }
    if (spec.kind.has_value() == e.contains("edges")) {
      throw ValidationError(ew + ": give exactly one of kind or edges");
    }
    if (e.contains("params")) spec.params = parse_params(e.at("params"), ew + ".params");
    if (e.contains("seed")) spec.seed = get<std::uint64_t>(e, "seed", ew);
    s.epochs.push_back(std::move(spec));
  }
  return s;
}

ScheduleSpec load_schedule(const fs::path& path) { return parse_schedule(read_json(path)); }

int declared_node_count(const ScheduleSpec& spec) {
  if (spec.n != 0) return spec.n;
  int n = 0;
  for (const EpochSpec& e : spec.epochs) {
    if (e.n != 0) return e.n;
    for (const Edge& edge : e.edges) n = std::max({n, edge.u + 1, edge.v + 1});
  }
  return n;
}

ExperimentConfig parse_config(const Json& j, const fs::path& base_dir) {
  const std::string where = "config";
  reject_unknown(j, {"run_id", "seed", "objective", "schedule", "schedule_file", "algorithms",
                     "max_iter", "record_every", "output_dir", "diging_stepsize", "formats"},
                 where);
  ExperimentConfig c;
  c.run_id = get_or<std::string>(j, "run_id", c.run_id, where);
  if (c.run_id.empty() || c.run_id.find_first_of("/\\") != std::string::npos) {
    throw ValidationError("config.run_id must be a nonempty file-name component");
  }
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed, where);
  c.objective = parse_objective(j.contains("objective") ? j.at("objective") : Json::object(), base_dir);
  if (j.contains("schedule") == j.contains("schedule_file")) {
    throw ValidationError("config: give exactly one of schedule or schedule_file");
  }
  if (j.contains("schedule")) {
    c.schedule = parse_schedule(j.at("schedule"));
  } else {
    fs::path p = get<std::string>(j, "schedule_file", where);
    if (p.is_relative()) p = base_dir / p;
    if (!fs::exists(p)) throw ValidationError("config.schedule_file: " + p.string() + " does not exist");
    c.schedule = load_schedule(p);
  }
  if (!j.contains("algorithms")) throw ValidationError("config.algorithms: required");
  for (const auto& name : get<std::vector<std::string>>(j, "algorithms", where)) {
    c.algorithms.push_back(parse_method(name));
  }
  if (c.algorithms.empty()) throw ValidationError("config.algorithms: need at least one algorithm");
  c.max_iter = get_or<int>(j, "max_iter", c.max_iter, where);
  c.record_every = get_or<int>(j, "record_every", c.record_every, where);
  if (c.max_iter < 1) throw ValidationError("config.max_iter must be >= 1");
  if (c.record_every < 1) throw ValidationError("config.record_every must be >= 1");
  fs::path out = get_or<std::string>(j, "output_dir", ".", where);
  c.output_dir = out.is_relative() ? base_dir / out : out;
  if (j.contains("diging_stepsize")) {
    c.diging_stepsize = get<double>(j, "diging_stepsize", where);
    if (!(*c.diging_stepsize > 0.0)) throw ValidationError("config.diging_stepsize must be > 0");
  }
  if (j.contains("formats")) {
    c.formats.clear();
    for (const auto& f : get<std::vector<std::string>>(j, "formats", where)) {
      c.formats.push_back(parse_trace_format(f));
    }
    if (c.formats.empty()) throw ValidationError("config.formats: need at least one format");
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  return parse_config(read_json(path), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

GraphSchedule build_schedule(const ScheduleSpec& spec, int n, int default_horizon,
                             std::uint64_t root_seed) {
  if (spec.n != 0 && spec.n != n) {
    throw ValidationError("schedule.n = " + std::to_string(spec.n) + " but the objective has " +
                          std::to_string(n) + " agents");
  }
  const int horizon = spec.horizon.value_or(default_horizon);
  if (spec.alternate_first) {
    return alternating_schedule(*spec.alternate_first, *spec.alternate_second, n, spec.period, horizon,
                                derive_seed(root_seed, Stream::kGraph));
  }
  std::vector<Epoch> epochs;
  for (std::size_t e = 0; e < spec.epochs.size(); ++e) {
    const EpochSpec& es = spec.epochs[e];
    if (es.n != 0 && es.n != n) {
      throw ValidationError("schedule.epochs[" + std::to_string(e) + "].n = " + std::to_string(es.n) +
                            " but the run has " + std::to_string(n) + " agents");
    }
    if (es.kind) {
      const std::uint64_t seed = es.seed.value_or(derive_seed(root_seed, Stream::kGraph, e));
      epochs.push_back({es.start, gen_topology(*es.kind, n, es.params, seed)});
    } else {
      epochs.push_back({es.start, Topology(n, es.edges)});
    }
  }
  return GraphSchedule(horizon, std::move(epochs));
}

AggregateObjective build_objective(const ObjectiveSpec& spec, std::uint64_t root_seed) {
  const std::uint64_t seed = derive_seed(root_seed, Stream::kData);
  AggregateObjective agg = [&] {
    if (spec.kind == "ridge") return gen_ridge_instance(spec.n, spec.l, spec.m, spec.c, spec.noise, seed);
    if (spec.kind == "logistic") return gen_logistic_instance(spec.n, spec.l, spec.m, spec.c, seed);
    if (spec.kind == "logistic_file") {
      return logistic_from_dataset(load_sparse_labeled(spec.path), spec.n, spec.l, spec.c, seed);
    }
    if (spec.kind == "quadratic") {
      std::vector<LocalObjective> locals;
      for (const Vector& a : spec.centers) locals.push_back(LocalObjective::centered(a));
      return AggregateObjective(std::move(locals));
    }
    throw ValidationError("objective.kind: unknown '" + spec.kind + "'");
  }();
  return spec.balance ? balance_strong_convexity(agg) : agg;
}

Json graph_info(const GraphSchedule& s) {
  Json out;
  out["horizon"] = s.horizon();
  out["n"] = s.n();
  Json epochs = Json::array();
  for (std::size_t e = 0; e < s.epochs().size(); ++e) {
    const Epoch& ep = s.epochs()[e];
    const SpectralInfo info = spectral_info(ep.topology);
    epochs.push_back({{"index", e},
                      {"start", ep.start},
                      {"edges", ep.topology.edges().size()},
                      {"lambda_max", num(info.lambda_max)},
                      {"lambda_min_pos", num(info.lambda_min_pos)},
                      {"chi", num(info.chi)}});
  }
  out["epochs"] = epochs;
  const ThetaBounds theta = theta_bounds(s);
  const ChangeStats stats = change_stats(s);
  out["theta_max"] = num(theta.theta_max);
  out["theta_min"] = num(theta.theta_min);
  out["m"] = stats.m;
  out["alpha"] = num(stats.alpha);
  return out;
}

namespace {

Json check_json(const BoundCheck& c) {
  Json j;
  j["applicable"] = true;
  j["clean"] = c.clean;
  j["max_violation"] = num(c.max_violation);
  j["min_slack"] = num(c.min_slack);
  j["first_violation"] = c.first_violation ? Json(*c.first_violation) : Json(nullptr);
  j["checked"] = c.checked;
  return j;
}

Json not_applicable(const std::string& why) {
  return Json{{"applicable", false}, {"reason", why}};
}

Json row_json(const MetricRow& r) {
  return Json{{"iter", r.iter},
              {"epoch", r.epoch},
              {"dual_value", num(r.dual_value)},
              {"dual_residual", num(r.dual_residual)},
              {"consensus_dist", num(r.consensus_dist)},
              {"primal_gap", num(r.primal_gap)},
              {"message_count", r.message_count}};
}

std::string extension(TraceFormat f) { return f == TraceFormat::kCsv ? "csv" : "json"; }

}  // namespace

ExperimentResult execute(const ExperimentConfig& config, bool write_files) {
  if (config.algorithms.empty()) throw ValidationError("config.algorithms: need at least one algorithm");
  const AggregateObjective agg = build_objective(config.objective, config.seed);
  const GraphSchedule s = build_schedule(config.schedule, agg.n(), config.max_iter, config.seed);
  const CentralSolution oracle = centralized_solve(agg);
  const ThetaBounds theta = theta_bounds(s);
  const DualConstants dc = dual_constants(agg, theta);
  const ChangeStats stats = change_stats(s);
  const Alg1Complexity complexity = alg1_complexity_from_log_term(dc.kappa, 0.0, stats.alpha);

  double R = 0.0;
  for (const Epoch& e : s.epochs()) {
    const AgentMatrix xs = min_norm_dual_solution(agg, sqrt_psd(laplacian(e.topology)), oracle.y_star);
    R = std::max(R, xs.norm());
  }

  ExperimentResult result;
  Json& summary = result.summary;
  std::vector<std::string> warnings;
  summary["run_id"] = config.run_id;
  summary["seed"] = config.seed;
  summary["n"] = agg.n();
  summary["dim"] = agg.dim();
  summary["max_iter"] = config.max_iter;
  summary["objective"] = {{"kind", config.objective.kind},
                          {"balanced", config.objective.balance},
                          {"mu_phi", num(agg.mu_phi())},
                          {"L_phi", num(agg.L_phi())},
                          {"kappa_phi", num(agg.kappa_phi())},
                          {"mu_bar", num(agg.mu_bar())},
                          {"kappa_bar", num(agg.kappa_bar())},
                          {"phi_star", num(oracle.phi_star)},
                          {"f_star", num(-oracle.phi_star)}};
  summary["dual_constants"] = {{"mu_f", num(dc.mu_f)}, {"L_f", num(dc.L_f)}, {"kappa", num(dc.kappa)}};
  summary["R"] = num(R);
  summary["schedule"] = graph_info(s);
  summary["alpha_ceiling"] = complexity.ceiling_unbounded ? Json("unbounded") : num(complexity.alpha_ceiling);
  summary["alpha_infeasible"] = complexity.infeasible;
  if (complexity.infeasible) {
    warnings.push_back("change fraction alpha = " + fmt(stats.alpha) + " is at or above the ceiling " +
                       fmt(complexity.alpha_ceiling) + "; convergence is not guaranteed");
  }

  if (write_files) fs::create_directories(config.output_dir);
  Json algorithms = Json::object();
  for (Method method : config.algorithms) {
    AlgorithmResult ar;
    ar.method = method;
    RunParams params;
    params.max_iter = config.max_iter;
    params.record_every = config.record_every;
    params.log_messages = false;
    if (method == Method::kNesterov) {
      ar.trace = run_distributed_nesterov(agg, s, params);
    } else if (method == Method::kDualGradient) {
      ar.trace = run_dual_gradient(agg, s, params);
    } else {
      DigingParams dp;
      static_cast<RunParams&>(dp) = params;
      dp.stepsize = config.diging_stepsize;
      ar.trace = run_diging(agg, s, dp);
    }
    ar.rows = compute_metrics(ar.trace, agg, oracle);

    Json a;
    a["stepsize"] = num(ar.trace.stepsize);
    a["momentum"] = num(ar.trace.momentum);
    a["momentum_disabled"] = ar.trace.momentum_disabled;
    a["aborted"] = ar.trace.aborted;
    a["warnings"] = ar.trace.warnings;
    a["final"] = row_json(ar.rows.back());
    Json checks;
    if (method == Method::kNesterov) {
      if (dc.kappa > 1.0) {
        const BoundCheck c = bound_check(ar.rows, [&](const MetricRow& r) {
          return nesterov_tv_bound(dc.L_f, dc.mu_f, R, r.epoch, r.iter);
        });
        checks["theorem3"] = check_json(c);
      } else {
        checks["theorem3"] = not_applicable("kappa = 1");
      }
    } else {
      checks["theorem3"] = not_applicable("accelerated runs only");
    }
    if (method == Method::kDualGradient && s.epochs().size() == 1) {
      const double q = gd_contraction(dc.L_f, dc.mu_f);
      const BoundCheck c = bound_check(ar.rows, [&](const MetricRow& r) {
        const double dist = std::pow(q, r.iter) * R;
        return 0.5 * dc.L_f * dist * dist;
      });
      checks["theorem2"] = check_json(c);
    } else {
      checks["theorem2"] = not_applicable(method == Method::kDualGradient ? "schedule has changes"
                                                                          : "dual gradient runs only");
    }
    if (method == Method::kDiging) {
      a["lambda0"] = num(diging_rates(agg.kappa_bar(), agg.n(), 1, 0.0, agg.mu_bar()).lambda0);
    }
    a["bound_checks"] = checks;
    for (const std::string& w : ar.trace.warnings) warnings.push_back(std::string(to_string(method)) + ": " + w);

    if (write_files) {
      for (TraceFormat f : config.formats) {
        const fs::path path =
            config.output_dir / (config.run_id + "_" + std::string(to_string(method)) + "." + extension(f));
        emit(ar.rows, f, path);
        result.files.push_back(path);
      }
    }
    algorithms[std::string(to_string(method))] = a;
    result.results.push_back(std::move(ar));
  }
  summary["algorithms"] = algorithms;
  summary["warnings"] = warnings;

  if (write_files) {
    const fs::path path = config.output_dir / (config.run_id + "_summary.json");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << summary.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
    result.files.push_back(path);
  }
  return result;
}

double median(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }),
               values.end());
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

SweepResult sweep(const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
                  const std::vector<int>& periods, TopologyKind first, TopologyKind second) {
  if (seeds.empty()) throw ValidationError("sweep: need at least one seed");
  if (periods.empty()) throw ValidationError("sweep: need at least one period");
  SweepResult out;
  std::map<std::pair<int, std::string>, std::vector<double>> residuals;
  for (int period : periods) {
    if (period < 1) throw ValidationError("sweep: periods must be >= 1");
    for (std::uint64_t seed : seeds) {
      ExperimentConfig cell = config;
      cell.seed = seed;
      cell.record_every = config.max_iter;
      cell.schedule = ScheduleSpec{};
      cell.schedule.horizon = config.max_iter;
      cell.schedule.alternate_first = first;
      cell.schedule.alternate_second = second;
      cell.schedule.period = period;
      const ExperimentResult r = execute(cell, false);
      for (const AlgorithmResult& ar : r.results) {
        const MetricRow& last = ar.rows.back();
        out.rows.push_back({seed, period, ar.method, last.dual_residual, last.primal_gap, last.consensus_dist});
        residuals[{period, std::string(to_string(ar.method))}].push_back(last.dual_residual);
      }
    }
  }
  for (auto& [key, values] : residuals) out.median_residual[key] = median(values);
  return out;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "seed,period,algorithm,dual_residual,primal_gap,consensus_dist\n";
  for (const SweepRow& r : result.rows) {
    out << r.seed << ',' << r.period << ',' << to_string(r.method) << ',' << fmt(r.dual_residual) << ','
        << fmt(r.primal_gap) << ',' << fmt(r.consensus_dist) << '\n';
  }
}

namespace {

class Args {
 public:
  Args(std::string bound, const std::map<std::string, double>& values, BoundReport& report)
      : bound_(std::move(bound)), values_(values), report_(report) {}

  double need(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      throw ValidationError("bounds " + bound_ + ": missing constant '" + key + "'");
    }
    report_.inputs.emplace_back(key, it->second);
    return it->second;
  }

  std::optional<double> maybe(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    report_.inputs.emplace_back(key, it->second);
    return it->second;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  void check_known(const std::set<std::string>& known) const {
    for (const auto& [key, v] : values_) {
      if (!known.count(key)) throw ValidationError("bounds " + bound_ + ": unknown constant '" + key + "'");
    }
  }

 private:
  std::string bound_;
  const std::map<std::string, double>& values_;
  BoundReport& report_;
};

int as_int(double v, const std::string& key) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError("constant '" + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

BoundReport evaluate_bound(const std::string& name, const std::map<std::string, double>& values) {
  BoundReport r;
  r.name = name;
  Args a(name, values, r);
  if (name == "thm2") {
    a.check_known({"L", "mu", "R", "k"});
    const double L = a.need("L"), mu = a.need("mu"), R = a.need("R");
    const int k = as_int(a.need("k"), "k");
    const double q = gd_contraction(L, mu);
    r.values = {{"contraction", q}, {"distance_bound", std::pow(q, k) * R}};
  } else if (name == "cor1") {
    a.check_known({"L", "mu", "R", "eps"});
    const double L = a.need("L"), mu = a.need("mu"), R = a.need("R"), eps = a.need("eps");
    r.values = {{"iterations", static_cast<double>(gd_iterations(L, mu, R, eps))}};
  } else if (name == "thm3") {
    a.check_known({"L", "mu", "R", "m", "N"});
    const double L = a.need("L"), mu = a.need("mu"), R = a.need("R");
    const int m = as_int(a.need("m"), "m");
    const int N = as_int(a.need("N"), "N");
    r.values = {{"bound", nesterov_tv_bound(L, mu, R, m, N)}};
  } else if (name == "thm5") {
    a.check_known({"kappa", "alpha", "logterm", "L", "mu", "R", "eps"});
    const double kappa = a.need("kappa");
    const double alpha = a.need("alpha");
    Alg1Complexity c;
    if (a.has("logterm")) {
      c = alg1_complexity_from_log_term(kappa, a.need("logterm"), alpha);
    } else {
      const double L = a.need("L"), mu = a.need("mu"), R = a.need("R"), eps = a.need("eps");
      c = alg1_complexity(kappa, L, mu, R, eps, alpha);
    }
    r.values = {{"iterations", static_cast<double>(c.iterations)},
                {"alpha_ceiling", c.alpha_ceiling},
                {"infeasible", c.infeasible ? 1.0 : 0.0}};
    r.degenerate = c.ceiling_unbounded;
    if (c.ceiling_unbounded) r.notes.push_back("kappa = 1: alpha ceiling unbounded");
    if (c.infeasible) r.notes.push_back("alpha at or above the ceiling: convergence not guaranteed");
  } else if (name == "cor2") {
    a.check_known({"eps", "kappa", "L", "mu", "xstar"});
    const double eps = a.need("eps"), kappa = a.need("kappa"), L = a.need("L"), mu = a.need("mu"),
                 xs = a.need("xstar");
    r.values = {{"primal_gap_bound", primal_from_dual_bound(eps, kappa, L, mu, xs)}};
  } else if (name == "prop1") {
    a.check_known({"kappa_bar", "n", "B", "delta", "mu_bar", "alpha"});
    const double kb = a.need("kappa_bar");
    const int n = as_int(a.need("n"), "n");
    const int B = as_int(a.maybe("B").value_or(1.0), "B");
    const double delta = a.maybe("delta").value_or(0.0);
    const double mu_bar = a.maybe("mu_bar").value_or(0.0);
    const std::optional<double> alpha = a.maybe("alpha");
    if (alpha && !a.has("mu_bar")) a.need("mu_bar");
    const DigingRates d = diging_rates(kb, n, B, delta, mu_bar, alpha);
    r.values = {{"lambda0", d.lambda0}, {"J", d.J}};
    if (mu_bar > 0.0) {
      r.values.emplace_back("alpha0", d.alpha0);
      r.values.emplace_back("alpha_max", d.alpha_max);
    }
    if (d.lambda) r.values.emplace_back("lambda", *d.lambda);
  } else if (name == "prop2") {
    a.check_known({"kappa", "L", "mu", "delta", "B", "c"});
    const double kappa = a.need("kappa");
    const std::optional<double> mu = a.maybe("mu");
    const std::optional<double> L = a.maybe("L");
    const double delta = a.maybe("delta").value_or(0.0);
    const int B = as_int(a.maybe("B").value_or(1.0), "B");
    const std::optional<double> c = a.maybe("c");
    if (c) {
      if (!mu) a.need("mu");
      if (!L) a.need("L");
    }
    const PandaRates p = panda_rates(kappa, L.value_or(0.0), mu.value_or(0.0), delta, B, c);
    r.values = {{"lambda0", p.lambda0}};
    if (mu) r.values.emplace_back("alpha_step", p.alpha_step);
    if (p.lambda) r.values.emplace_back("lambda", *p.lambda);
  } else if (name == "prop3") {
    a.check_known({"lambda2", "kappa_phi", "chi"});
    const double l2 = a.need("lambda2"), kp = a.need("kappa_phi"), chi = a.need("chi");
    const StaticComparison s = static_nesterov_comparison(l2, kp, chi);
    r.values = {{"lhs", s.lhs}, {"rhs", s.rhs}, {"favors_alg1", s.favors_alg1 ? 1.0 : 0.0}};
  } else {
    throw ValidationError("unknown bound '" + name +
                          "' (valid: thm2, cor1, thm3, thm5, cor2, prop1, prop2, prop3)");
  }
  return r;
}

std::string format_report(const BoundReport& report) {
  std::ostringstream out;
  out << report.name << '\n';
  for (const auto& [k, v] : report.inputs) out << "  " << k << " = " << fmt(v) << '\n';
  for (const auto& [k, v] : report.values) out << "  -> " << k << " = " << fmt(v) << '\n';
  for (const std::string& note : report.notes) out << "  note: " << note << '\n';
  return out.str();
}

}  // namespace tvopt
