// Python bindings for the tvopt core.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>
#include <vector>

#include "tvopt/error.hpp"
#include "tvopt/experiment.hpp"

namespace py = pybind11;
using namespace tvopt;

namespace {

std::vector<Edge> edges_from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> out;
  out.reserve(pairs.size());
  for (const auto& [u, v] : pairs) out.push_back({u, v, 1.0});
  return out;
}

py::dict record_dict(const IterRecord& r) {
  py::dict d;
  d["iter"] = r.iter;
  d["epoch"] = r.epoch;
  d["dual_point"] = r.dual_point;
  d["momentum_point"] = r.momentum_point;
  d["primal"] = r.primal;
  d["dual_value"] = r.dual_value;
  d["consensus_dist"] = r.consensus_dist;
  d["message_count"] = r.message_count;
  d["tracking_error"] = r.tracking_error;
  return d;
}

py::object parse_json(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_tvopt, m) {
  m.doc() = "Decentralized optimization over time-varying graphs";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // Graphs
  py::enum_<TopologyKind>(m, "TopologyKind")
      .value("path", TopologyKind::kPath)
      .value("cycle", TopologyKind::kCycle)
      .value("star", TopologyKind::kStar)
      .value("complete", TopologyKind::kComplete)
      .value("erdos_renyi", TopologyKind::kErdosRenyi)
      .value("random_geometric", TopologyKind::kRandomGeometric);

  py::class_<Topology>(m, "Topology")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) {
             return Topology(n, edges_from_pairs(edges));
           }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Topology::n)
      .def_property_readonly("edges",
                             [](const Topology& t) {
                               std::vector<std::pair<int, int>> out;
                               for (const Edge& e : t.edges()) out.emplace_back(e.u, e.v);
                               return out;
                             })
      .def("has_edge", &Topology::has_edge)
      .def("connected", &Topology::connected);

  m.def(
      "gen_topology",
      [](const std::string& kind, int n, std::uint64_t seed, std::optional<double> p,
         std::optional<double> radius) {
        TopologyParams params;
        params.p = p;
        params.radius = radius;
        return gen_topology(parse_topology_kind(kind), n, params, seed);
      },
      py::arg("kind"), py::arg("n"), py::arg("seed") = 0, py::arg("p") = py::none(),
      py::arg("radius") = py::none());

  m.def("laplacian", [](const Topology& t) { return laplacian(t).matrix(); });

  py::class_<SpectralInfo>(m, "SpectralInfo")
      .def_readonly("lambda_max", &SpectralInfo::lambda_max)
      .def_readonly("lambda_min_pos", &SpectralInfo::lambda_min_pos)
      .def_readonly("chi", &SpectralInfo::chi)
      .def_readonly("sigma_max", &SpectralInfo::sigma_max)
      .def_readonly("sigma_min_pos", &SpectralInfo::sigma_min_pos);
  m.def("spectral_info", &spectral_info);

  py::class_<GraphSchedule>(m, "GraphSchedule")
      .def(py::init([](int horizon, const std::vector<std::pair<int, Topology>>& epochs) {
             std::vector<Epoch> out;
             for (const auto& [start, t] : epochs) out.push_back({start, t});
             return GraphSchedule(horizon, std::move(out));
           }),
           py::arg("horizon"), py::arg("epochs"))
      .def_static("constant", &GraphSchedule::constant)
      .def_property_readonly("horizon", &GraphSchedule::horizon)
      .def_property_readonly("n", &GraphSchedule::n)
      .def("change_moments", &GraphSchedule::change_moments)
      .def("epoch_index", &GraphSchedule::epoch_index);

  m.def(
      "alternating_schedule",
      [](const std::string& first, const std::string& second, int n, int period, int horizon,
         std::uint64_t seed) {
        return alternating_schedule(parse_topology_kind(first), parse_topology_kind(second), n,
                                    period, horizon, seed);
      },
      py::arg("first"), py::arg("second"), py::arg("n"), py::arg("period"), py::arg("horizon"),
      py::arg("seed") = 0);

  py::class_<ThetaBounds>(m, "ThetaBounds")
      .def(py::init([](double theta_max, double theta_min) { return ThetaBounds{theta_max, theta_min}; }),
           py::arg("theta_max"), py::arg("theta_min"))
      .def_readonly("theta_max", &ThetaBounds::theta_max)
      .def_readonly("theta_min", &ThetaBounds::theta_min);
  m.def("theta_bounds", &theta_bounds);
  m.def("mixing_delta", &mixing_delta, py::arg("schedule"), py::arg("window"));

  // Objectives
  py::class_<LocalObjective>(m, "LocalObjective")
      .def_static("quadratic", &LocalObjective::quadratic, py::arg("p"), py::arg("q"), py::arg("r") = 0.0)
      .def_static("centered", &LocalObjective::centered, py::arg("center"))
      .def_static("logistic", &LocalObjective::logistic, py::arg("samples"), py::arg("labels"),
                  py::arg("loss_weight"), py::arg("ridge"))
      .def_property_readonly("dim", &LocalObjective::dim)
      .def_property_readonly("mu", &LocalObjective::mu)
      .def_property_readonly("L", &LocalObjective::L)
      .def("value", &LocalObjective::value)
      .def("gradient", &LocalObjective::gradient)
      .def("conj_argmax", &LocalObjective::conj_argmax)
      .def("conj_value", &LocalObjective::conj_value);

  py::class_<AggregateObjective>(m, "AggregateObjective")
      .def(py::init<std::vector<LocalObjective>>(), py::arg("locals"))
      .def_property_readonly("n", &AggregateObjective::n)
      .def_property_readonly("dim", &AggregateObjective::dim)
      .def_property_readonly("mu_phi", &AggregateObjective::mu_phi)
      .def_property_readonly("L_phi", &AggregateObjective::L_phi)
      .def_property_readonly("kappa_phi", &AggregateObjective::kappa_phi)
      .def("local", &AggregateObjective::local)
      .def("value_at", &AggregateObjective::value_at)
      .def("conj_argmax", py::overload_cast<const AgentMatrix&>(&AggregateObjective::conj_argmax, py::const_))
      .def("conj_value", &AggregateObjective::conj_value);

  m.def("gen_ridge_instance", [](int n, int l, int m_, double c, double noise, std::uint64_t seed) {
    return gen_ridge_instance(n, l, m_, c, noise, seed);
  }, py::arg("n"), py::arg("l"), py::arg("m"), py::arg("c") = 0.1, py::arg("noise") = 0.1,
     py::arg("seed") = 0);
  m.def("gen_logistic_instance", &gen_logistic_instance, py::arg("n"), py::arg("l"), py::arg("m"),
        py::arg("c") = 0.1, py::arg("seed") = 0);
  m.def("balance_strong_convexity", &balance_strong_convexity);

  py::class_<CentralSolution>(m, "CentralSolution")
      .def_readonly("y_star", &CentralSolution::y_star)
      .def_readonly("phi_star", &CentralSolution::phi_star);
  m.def("centralized_solve", &centralized_solve, py::arg("objective"), py::arg("tol") = 1e-10);

  py::class_<DualConstants>(m, "DualConstants")
      .def_readonly("mu_f", &DualConstants::mu_f)
      .def_readonly("L_f", &DualConstants::L_f)
      .def_readonly("kappa", &DualConstants::kappa);
  m.def("dual_constants", &dual_constants);

  // Algorithms
  py::class_<RunTrace>(m, "RunTrace")
      .def_property_readonly("method", [](const RunTrace& t) { return std::string(to_string(t.method)); })
      .def_property_readonly("records",
                             [](const RunTrace& t) {
                               py::list out;
                               for (const IterRecord& r : t.records) out.append(record_dict(r));
                               return out;
                             })
      .def_property_readonly("messages", [](const RunTrace& t) { return t.messages.per_iteration; })
      .def_readonly("constants", &RunTrace::constants)
      .def_readonly("momentum", &RunTrace::momentum)
      .def_readonly("stepsize", &RunTrace::stepsize)
      .def_readonly("aborted", &RunTrace::aborted)
      .def_readonly("warnings", &RunTrace::warnings);

  m.def(
      "run",
      [](const std::string& method, const AggregateObjective& agg, const GraphSchedule& s,
         int max_iter, int record_every, bool log_messages, std::optional<double> stepsize) {
        const Method which = parse_method(method);
        if (which == Method::kDiging) {
          DigingParams p;
          p.max_iter = max_iter;
          p.record_every = record_every;
          p.log_messages = log_messages;
          p.stepsize = stepsize;
          return run_diging(agg, s, p);
        }
        RunParams p{max_iter, record_every, log_messages};
        return which == Method::kNesterov ? run_distributed_nesterov(agg, s, p)
                                          : run_dual_gradient(agg, s, p);
      },
      py::arg("method"), py::arg("objective"), py::arg("schedule"), py::arg("max_iter") = 100,
      py::arg("record_every") = 1, py::arg("log_messages") = true, py::arg("stepsize") = py::none());

  // Metrics
  m.def(
      "compute_metrics",
      [](const RunTrace& trace, const AggregateObjective& agg, const CentralSolution& oracle) {
        py::list out;
        for (const MetricRow& r : compute_metrics(trace, agg, oracle)) {
          py::dict d;
          d["iter"] = r.iter;
          d["epoch"] = r.epoch;
          d["dual_value"] = r.dual_value;
          d["dual_residual"] = r.dual_residual;
          d["consensus_dist"] = r.consensus_dist;
          d["primal_gap"] = r.primal_gap;
          d["message_count"] = r.message_count;
          d["agent_gap"] = r.agent_gap;
          out.append(d);
        }
        return out;
      },
      py::arg("trace"), py::arg("objective"), py::arg("oracle"));

  // Theory
  m.def("gd_contraction", &gd_contraction);
  m.def("gd_iterations", &gd_iterations);
  m.def("nesterov_tv_bound", &nesterov_tv_bound, py::arg("L"), py::arg("mu"), py::arg("R"),
        py::arg("m"), py::arg("N"));
  m.def("primal_from_dual_bound", &primal_from_dual_bound);
  m.def("alg1_rate", &alg1_rate);
  m.def(
      "evaluate_bound",
      [](const std::string& name, const std::map<std::string, double>& args) {
        const BoundReport r = evaluate_bound(name, args);
        py::dict d;
        d["name"] = r.name;
        d["inputs"] = r.inputs;
        d["values"] = r.values;
        d["degenerate"] = r.degenerate;
        d["satisfied"] = r.satisfied;
        d["notes"] = r.notes;
        d["text"] = format_report(r);
        return d;
      },
      py::arg("name"), py::arg("args"));

  // Experiments
  m.def(
      "execute",
      [](const std::string& config_json, const std::filesystem::path& base_dir, bool write_files) {
        const ExperimentConfig config = parse_config(Json::parse(config_json), base_dir);
        const ExperimentResult result = execute(config, write_files);
        py::dict d;
        d["summary"] = parse_json(result.summary);
        py::list files;
        for (const auto& f : result.files) files.append(f.string());
        d["files"] = files;
        return d;
      },
      py::arg("config_json"), py::arg("base_dir") = ".", py::arg("write_files") = false);
  m.def("graph_info", [](const GraphSchedule& s) { return parse_json(graph_info(s)); });

}
