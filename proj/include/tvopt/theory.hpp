#pragma once

// Closed-form rates, iteration counts and bounds. Natural logarithms throughout.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvopt/linalg.hpp"

namespace tvopt {

struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::pair<std::string, double>> values;
  bool degenerate = false;          // a value is intentionally non-finite (e.g. unbounded ceiling)
  std::optional<bool> satisfied;    // comparison against a measured quantity, when made
  std::vector<std::string> notes;
};

/// (L - mu)/(L + mu).
double gd_contraction(double L, double mu);

/// ceil(ln(R/eps) / ln((L+mu)/(L-mu))); 0 when R <= eps, 1 when L == mu.
long gd_iterations(double L, double mu, double R, double eps);

/// (L+mu)/2 R^2 kappa^m (1 - 1/sqrt(kappa))^N with kappa = L/mu.
double nesterov_tv_bound(double L, double mu, double R, int m, int N);

struct Alg1Complexity {
  long iterations = 0;
  double alpha_ceiling = 0.0;  // 1/(sqrt(kappa) ln kappa); +inf when kappa == 1
  bool ceiling_unbounded = false;
  bool infeasible = false;     // alpha >= ceiling
  double log_term = 0.0;
};

/// N = ceil((sqrt(kappa) + alpha ln kappa) * ln((L+mu) R^2 / (2 eps))).
Alg1Complexity alg1_complexity(double kappa, double L, double mu, double R, double eps, double alpha);
/// Same with the logarithmic factor supplied directly.
Alg1Complexity alg1_complexity_from_log_term(double kappa, double log_term, double alpha);

/// 2 kappa eps + L ||X*|| sqrt(2 eps / mu).
double primal_from_dual_bound(double eps, double kappa, double L, double mu, double norm_x_star);

using DualFunction = std::function<double(const AgentMatrix&)>;

struct DeltaCheck {
  double worst_slack = 0.0;  // min over points of bound - delta
  int worst_index = -1;
  bool ok = true;            // worst_slack >= -1e-9
};

/// delta(x) = f_next(x) - f_k(x) against ((L-mu)/mu)(f_k(x) - f*) at each point.
DeltaCheck delta_bound_check(const DualFunction& f_k, const DualFunction& f_next, double f_star,
                             double L, double mu, const std::vector<AgentMatrix>& points);

struct DigingRates {
  double lambda0 = 0.0;
  double J = 0.0;
  double alpha0 = 0.0;         // branch switch point
  double alpha_max = 0.0;      // 1.5 (1-delta)^2 / (mu_bar J)
  std::optional<double> lambda;
  int branch = 0;              // 1 or 2 when lambda is set
};

/// J = 3 sqrt(kappa_bar) B^2 (1 + 4 sqrt(n) sqrt(kappa_bar)).
double diging_j(double kappa_bar, int n, int B);
/// 1.5/(mu_bar (J + 1)).
double diging_default_stepsize(double kappa_bar, int n, double mu_bar, int B);
/// lambda0 = 1 - 1/(12 kappa_bar^1.5 sqrt(n)); with alpha, the two-branch rate.
DigingRates diging_rates(double kappa_bar, int n, int B, double delta, double mu_bar,
                         std::optional<double> alpha = std::nullopt);

struct PandaRates {
  double lambda0 = 0.0;
  double alpha_step = 0.0;
  std::optional<double> lambda;
};

PandaRates panda_rates(double kappa, double L, double mu, double delta, int B,
                       std::optional<double> c = std::nullopt);

struct StaticComparison {
  bool favors_alg1 = false;
  double lhs = 0.0;  // (lambda2 (1 - lambda2))^1.5 / 250 * sqrt(chi)
  double rhs = 0.0;  // kappa_Phi^(3/14)
};

StaticComparison static_nesterov_comparison(double lambda2, double kappa_phi, double chi);

/// Rate of Algorithm 1: 1 - 1/(kappa_Phi^0.5 (theta_max/theta_min)^0.25).
double alg1_rate(double kappa_phi, double theta_max, double theta_min);

}  // namespace tvopt
