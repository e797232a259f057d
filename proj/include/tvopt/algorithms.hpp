#pragma once

// Iterative methods over a graph schedule.
//
// Distributed runs simulate message passing explicitly: at every iteration each
// agent sends its current vector to the neighbours of the epoch's topology and
// combines only what it received. Every send is recorded in the MessageLog.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tvopt/graphs.hpp"
#include "tvopt/linalg.hpp"
#include "tvopt/objectives.hpp"

namespace tvopt {

enum class Method { kNesterov, kDualGradient, kDiging };

std::string_view to_string(Method m);
/// "nesterov", "dual_gd" or "diging".
Method parse_method(std::string_view name);

/// Directed (sender, receiver) pairs, one list per iteration.
struct MessageLog {
  std::vector<std::vector<std::pair<int, int>>> per_iteration;
};

struct IterRecord {
  int iter = 0;
  int epoch = 0;               // epoch in force at `iter`
  AgentMatrix dual_point;      // gradient-step iterate z~ (dual methods only)
  AgentMatrix momentum_point;  // z used for communication (dual methods only)
  AgentMatrix primal;          // y~(z~) for dual methods, x for DIGing
  double dual_value = 0.0;     // Phi*(z~); NaN for DIGing
  double consensus_dist = 0.0; // ||primal - mean column * 1^T||_F
  int message_count = 0;       // sends during the step that produced this record
  double tracking_error = 0.0; // DIGing: ||mean(u) - mean(grad)||
  AgentMatrix tracker;         // DIGing: gradient tracker u
};

struct RunTrace {
  Method method = Method::kNesterov;
  std::vector<IterRecord> records;
  MessageLog messages;
  DualConstants constants;  // dual methods only
  double momentum = 0.0;    // beta of the Nesterov extrapolation
  double stepsize = 0.0;    // 1/L_f for dual methods, alpha for DIGing
  bool momentum_disabled = false;
  bool aborted = false;
  std::vector<std::string> warnings;
};

struct RunParams {
  int max_iter = 100;
  int record_every = 1;
  bool log_messages = true;
};

struct DigingParams : RunParams {
  std::optional<double> stepsize;  // default 1.5/(mu_bar (J + 1)) with B = 1
};

/// Column i of the result is sum_j W_ij y_j, computed by agent i from the
/// vectors its neighbours sent. Appends the sends to `log` when non-null.
AgentMatrix laplacian_exchange(const Topology& t, const AgentMatrix& y,
                               std::vector<std::pair<int, int>>* log);

/// Algorithm 1: conjugate step, neighbour exchange, gradient step with 1/L_f,
/// Nesterov extrapolation with beta = (sqrt(kappa)-1)/(sqrt(kappa)+1). Starts at z = 0.
/// When kappa < 1 + 1e-12 the extrapolation is dropped (beta = 0) and a warning recorded.
RunTrace run_distributed_nesterov(const AggregateObjective& agg, const GraphSchedule& s,
                                  const RunParams& params);

/// The same iteration without extrapolation.
RunTrace run_dual_gradient(const AggregateObjective& agg, const GraphSchedule& s,
                           const RunParams& params);

/// Gradient tracking with V_k = I - W_k/n, x^0 = 0, u^0 = grad Phi(x^0).
/// Stops early with `aborted` set when ||x||_F exceeds 1e12.
RunTrace run_diging(const AggregateObjective& agg, const GraphSchedule& s,
                    const DigingParams& params);

// ---------------------------------------------------------------------------
// Centralised dual machinery in X-space, f_k(X) = Phi*(-X sqrt(W_k)).

/// f(X) for the given sqrt(W).
double dual_value(const AggregateObjective& agg, const SymMatrix& sqrt_w, const AgentMatrix& x);
/// grad f(X) = -Y(X) sqrt(W) with Y(X) the conjugate argmax at -X sqrt(W).
AgentMatrix dual_gradient(const AggregateObjective& agg, const SymMatrix& sqrt_w,
                          const AgentMatrix& x);
/// Minimum-norm minimiser of f for one graph: -Z* pinv(sqrt(W)), Z*_i = grad phi_i(y*).
AgentMatrix min_norm_dual_solution(const AggregateObjective& agg, const SymMatrix& sqrt_w,
                                   const Vector& y_star);

struct XSpaceParams {
  int max_iter = 100;
  bool accelerated = true;           // Nesterov extrapolation, or plain gradient descent
  std::optional<AgentMatrix> x0;     // projected onto (ker W)^perp; default 0
  double oracle_tol = 1e-12;
};

struct XSpaceRecord {
  int iter = 0;
  int epoch = 0;
  AgentMatrix x;          // extrapolated point x_k (equals y for gradient descent)
  AgentMatrix y;          // gradient-step iterate y_k
  AgentMatrix z;          // auxiliary sequence z_k of the potential analysis
  double gap = 0.0;       // f_k(y_k) - f*
  double gap_next = 0.0;  // f_k(y_{k+1}) - f*, filled for k < max_iter
  double distance = 0.0;  // ||y_k - X*||_F
};

struct XSpaceTrace {
  std::vector<XSpaceRecord> records;
  DualConstants constants;
  CentralSolution oracle;
  double f_star = 0.0;                  // -phi*
  AgentMatrix x_star;                   // min-norm minimiser of the first epoch
  std::vector<AgentMatrix> epoch_minimizers;
  bool common_minimizer = true;         // all epochs share x_star
  double R = 0.0;                       // max over epochs ||X_0 - X*_e||_F
  std::vector<int> change_moments;
  bool accelerated = true;
};

/// Runs the accelerated (or plain) gradient method centrally on X with explicit
/// sqrt(W_k). Gaps are evaluated as Bregman divergences of Phi* around Z*, which
/// equals f_k(X) - f* on this subspace and does not lose digits near the optimum.
XSpaceTrace run_xspace_reference(const AggregateObjective& agg, const GraphSchedule& s,
                                 const XSpaceParams& params);

}  // namespace tvopt
