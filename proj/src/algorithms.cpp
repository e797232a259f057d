#include "tvopt/algorithms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tvopt/error.hpp"
#include "tvopt/theory.hpp"

namespace tvopt {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kNesterov: return "nesterov";
    case Method::kDualGradient: return "dual_gd";
    case Method::kDiging: return "diging";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kNesterov, Method::kDualGradient, Method::kDiging}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown algorithm '" + std::string(name) +
                        "' (valid: nesterov, dual_gd, diging)");
}

AgentMatrix laplacian_exchange(const Topology& t, const AgentMatrix& y,
                               std::vector<std::pair<int, int>>* log) {
  const int n = t.n();
  if (y.cols() != n) throw ValidationError("exchange: column count differs from node count");
  struct Message {
    int sender;
    Vector payload;
  };
  std::vector<std::vector<Message>> inbox(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, w] : t.neighbors(i)) {
      inbox[j].push_back({i, y.col(i)});
      if (log != nullptr) log->emplace_back(i, j);
    }
  }
  AgentMatrix out(y.rows(), n);
  for (int j = 0; j < n; ++j) {
    const auto nbrs = t.neighbors(j);
    Vector acc = Vector::Zero(y.rows());
    for (const Message& m : inbox[j]) {
      double w = 0.0;
      for (const auto& [k, wk] : nbrs) {
        if (k == m.sender) w = wk;
      }
      acc += w * (y.col(j) - m.payload);
    }
    out.col(j) = acc;
  }
  return out;
}

namespace {

double consensus_distance(const AgentMatrix& y) {
  return project_consensus_orth(y).norm();
}

void validate(const AggregateObjective& agg, const GraphSchedule& s, const RunParams& p) {
  if (agg.n() != s.n()) {
    throw ValidationError("objective has " + std::to_string(agg.n()) + " agents but the schedule has " +
                          std::to_string(s.n()) + " nodes");
  }
  if (p.max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (p.record_every < 1) throw ValidationError("record_every must be >= 1");
}

bool should_record(int iter, const RunParams& p) {
  return iter % p.record_every == 0 || iter == p.max_iter;
}

IterRecord dual_record(const AggregateObjective& agg, int iter, int epoch, const AgentMatrix& z_tilde,
                       const AgentMatrix& z, int messages) {
  IterRecord r;
  r.iter = iter;
  r.epoch = epoch;
  r.dual_point = z_tilde;
  r.momentum_point = z;
  r.primal = agg.conj_argmax(z_tilde);
  double value = 0.0;
  for (int i = 0; i < agg.n(); ++i) {
    value += z_tilde.col(i).dot(r.primal.col(i)) - agg.local(i).value(r.primal.col(i));
  }
  r.dual_value = value;
  r.consensus_dist = consensus_distance(r.primal);
  r.message_count = messages;
  return r;
}

RunTrace run_dual(const AggregateObjective& agg, const GraphSchedule& s, const RunParams& params,
                  bool accelerated) {
  validate(agg, s, params);
  RunTrace trace;
  trace.method = accelerated ? Method::kNesterov : Method::kDualGradient;
  trace.constants = dual_constants(agg, theta_bounds(s));
  trace.stepsize = 1.0 / trace.constants.L_f;
  if (accelerated) {
    if (trace.constants.kappa < 1.0 + 1e-12) {
      trace.momentum_disabled = true;
      trace.warnings.push_back("kappa = 1: extrapolation disabled, running plain gradient steps");
    } else {
      const double root = std::sqrt(trace.constants.kappa);
      trace.momentum = (root - 1.0) / (root + 1.0);
    }
  }
  const double beta = trace.momentum;

  const int d = agg.dim();
  const int n = agg.n();
  AgentMatrix z = AgentMatrix::Zero(d, n);
  AgentMatrix z_tilde = AgentMatrix::Zero(d, n);
  trace.records.push_back(dual_record(agg, 0, s.epoch_index(0), z_tilde, z, 0));

  std::vector<std::pair<int, int>> sent;
  for (int k = 0; k < params.max_iter; ++k) {
    const Topology& topo = s.topology_at(k);
    const AgentMatrix y_tilde = agg.conj_argmax(z);
    sent.clear();
    const AgentMatrix wy = laplacian_exchange(topo, y_tilde, &sent);
    const AgentMatrix z_tilde_next = z - trace.stepsize * wy;
    z = (1.0 + beta) * z_tilde_next - beta * z_tilde;
    z_tilde = z_tilde_next;

    const int count = static_cast<int>(sent.size());
    if (params.log_messages) trace.messages.per_iteration.push_back(sent);
    if (should_record(k + 1, params)) {
      trace.records.push_back(dual_record(agg, k + 1, s.epoch_index(k + 1), z_tilde, z, count));
    }
  }
  return trace;
}

}  // namespace

RunTrace run_distributed_nesterov(const AggregateObjective& agg, const GraphSchedule& s,
                                  const RunParams& params) {
  return run_dual(agg, s, params, true);
}

RunTrace run_dual_gradient(const AggregateObjective& agg, const GraphSchedule& s,
                           const RunParams& params) {
  return run_dual(agg, s, params, false);
}

RunTrace run_diging(const AggregateObjective& agg, const GraphSchedule& s,
                    const DigingParams& params) {
  validate(agg, s, params);
  RunTrace trace;
  trace.method = Method::kDiging;
  trace.stepsize = params.stepsize.value_or(
      diging_default_stepsize(agg.kappa_bar(), agg.n(), agg.mu_bar(), 1));
  if (!(trace.stepsize > 0.0)) throw ValidationError("diging: stepsize must be > 0");

  const int d = agg.dim();
  const int n = agg.n();
  AgentMatrix x = AgentMatrix::Zero(d, n);
  AgentMatrix g = agg.gradients(x);
  AgentMatrix u = g;

  auto record = [&](int iter, int messages) {
    IterRecord r;
    r.iter = iter;
    r.epoch = s.epoch_index(iter);
    r.primal = x;
    r.dual_value = std::numeric_limits<double>::quiet_NaN();
    r.consensus_dist = consensus_distance(x);
    r.message_count = messages;
    r.tracking_error = (u.rowwise().mean() - g.rowwise().mean()).norm();
    r.tracker = u;
    trace.records.push_back(std::move(r));
  };
  record(0, 0);

  std::vector<std::pair<int, int>> sent;
  AgentMatrix packed(2 * d, n);
  for (int k = 0; k < params.max_iter; ++k) {
    const Topology& topo = s.topology_at(k);
    packed.topRows(d) = x;
    packed.bottomRows(d) = u;
    sent.clear();
    // V y = y - (W y)/n, one message per directed edge carries both x_i and u_i.
    const AgentMatrix mixed = packed - laplacian_exchange(topo, packed, &sent) / n;
    const AgentMatrix x_next = mixed.topRows(d) - trace.stepsize * u;
    const AgentMatrix g_next = agg.gradients(x_next);
    u = mixed.bottomRows(d) + g_next - g;
    x = x_next;
    g = g_next;

    const int count = static_cast<int>(sent.size());
    if (params.log_messages) trace.messages.per_iteration.push_back(sent);
    const bool diverged = !x.allFinite() || x.norm() > 1e12;
    if (diverged || should_record(k + 1, params)) record(k + 1, count);
    if (diverged) {
      trace.aborted = true;
      trace.warnings.push_back("diging diverged at iteration " + std::to_string(k + 1) +
                               " (||x||_F > 1e12)");
      break;
    }
  }
  return trace;
}

double dual_value(const AggregateObjective& agg, const SymMatrix& sqrt_w, const AgentMatrix& x) {
  return agg.conj_value(-x * sqrt_w.matrix());
}

AgentMatrix dual_gradient(const AggregateObjective& agg, const SymMatrix& sqrt_w,
                          const AgentMatrix& x) {
  const AgentMatrix y = agg.conj_argmax(-x * sqrt_w.matrix());
  return -y * sqrt_w.matrix();
}

AgentMatrix min_norm_dual_solution(const AggregateObjective& agg, const SymMatrix& sqrt_w,
                                   const Vector& y_star) {
  AgentMatrix z_star(agg.dim(), agg.n());
  for (int i = 0; i < agg.n(); ++i) z_star.col(i) = agg.local(i).gradient(y_star);
  return -z_star * pinv_psd(sqrt_w).matrix();
}

XSpaceTrace run_xspace_reference(const AggregateObjective& agg, const GraphSchedule& s,
                                 const XSpaceParams& params) {
  if (agg.n() != s.n()) throw ValidationError("objective and schedule disagree on the agent count");
  if (params.max_iter < 1) throw ValidationError("max_iter must be >= 1");

  XSpaceTrace out;
  out.accelerated = params.accelerated;
  out.constants = dual_constants(agg, theta_bounds(s));
  out.oracle = centralized_solve(agg, params.oracle_tol);
  out.f_star = -out.oracle.phi_star;
  out.change_moments = s.change_moments();

  const int d = agg.dim();
  const int n = agg.n();
  std::vector<SymMatrix> roots;
  roots.reserve(s.epochs().size());
  for (const Epoch& e : s.epochs()) roots.push_back(sqrt_psd(laplacian(e.topology)));

  AgentMatrix z_star(d, n);
  for (int i = 0; i < n; ++i) z_star.col(i) = agg.local(i).gradient(out.oracle.y_star);

  AgentMatrix x0 = AgentMatrix::Zero(d, n);
  if (params.x0) {
    if (params.x0->rows() != d || params.x0->cols() != n) throw ValidationError("x0 has the wrong shape");
    x0 = project_consensus_orth(*params.x0);
  }

  for (const SymMatrix& r : roots) {
    out.epoch_minimizers.push_back(min_norm_dual_solution(agg, r, out.oracle.y_star));
  }
  out.x_star = out.epoch_minimizers.front();
  for (const AgentMatrix& xs : out.epoch_minimizers) {
    if ((xs - out.x_star).norm() > 1e-9 * (1.0 + out.x_star.norm())) out.common_minimizer = false;
    out.R = std::max(out.R, (x0 - xs).norm());
  }

  auto gap = [&](int epoch, const AgentMatrix& x) {
    const AgentMatrix zk = -x * roots[epoch].matrix();
    double g = 0.0;
    for (int i = 0; i < n; ++i) g += agg.local(i).conj_bregman(zk.col(i), z_star.col(i));
    return g;
  };

  const double L = out.constants.L_f;
  const double root_kappa = std::sqrt(out.constants.kappa);
  const double beta = params.accelerated ? (root_kappa - 1.0) / (root_kappa + 1.0) : 0.0;
  const double tau = 1.0 / (root_kappa + 1.0);

  AgentMatrix x = x0;
  AgentMatrix y = x0;
  AgentMatrix z = x0;
  auto push = [&](int k) {
    XSpaceRecord r;
    r.iter = k;
    r.epoch = s.epoch_index(k);
    r.x = x;
    r.y = y;
    r.z = z;
    r.gap = gap(r.epoch, y);
    r.distance = (y - out.epoch_minimizers[r.epoch]).norm();
    out.records.push_back(std::move(r));
  };
  push(0);

  for (int k = 0; k < params.max_iter; ++k) {
    const int e = s.epoch_index(k);
    const AgentMatrix y_next = x - dual_gradient(agg, roots[e], x) / L;
    const AgentMatrix x_next = (1.0 + beta) * y_next - beta * y;
    out.records.back().gap_next = gap(e, y_next);
    x = x_next;
    y = y_next;
    z = params.accelerated ? AgentMatrix(x / tau - (1.0 - tau) / tau * y) : AgentMatrix(y);
    push(k + 1);
  }
  return out;
}

}  // namespace tvopt
