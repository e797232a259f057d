#include "tvopt/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tvopt/error.hpp"

namespace tvopt {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

double gd_contraction(double L, double mu) {
  require(mu > 0.0 && L >= mu, "gd_contraction: need L >= mu > 0");
  return (L - mu) / (L + mu);
}

long gd_iterations(double L, double mu, double R, double eps) {
  require(mu > 0.0 && L >= mu, "gd_iterations: need L >= mu > 0");
  require(R >= 0.0 && eps > 0.0, "gd_iterations: need R >= 0 and eps > 0");
  if (R <= eps) return 0;
  if (L == mu) return 1;
  return static_cast<long>(std::ceil(std::log(R / eps) / std::log((L + mu) / (L - mu))));
}

double nesterov_tv_bound(double L, double mu, double R, int m, int N) {
  require(mu > 0.0 && L >= mu, "nesterov_tv_bound: need L >= mu > 0");
  require(m >= 0 && N >= 0, "nesterov_tv_bound: need m, N >= 0");
  const double kappa = L / mu;
  return 0.5 * (L + mu) * R * R * std::pow(kappa, m) * std::pow(1.0 - 1.0 / std::sqrt(kappa), N);
}

Alg1Complexity alg1_complexity_from_log_term(double kappa, double log_term, double alpha) {
  require(kappa >= 1.0, "alg1_complexity: need kappa >= 1");
  require(alpha >= 0.0, "alg1_complexity: need alpha >= 0");
  Alg1Complexity out;
  out.log_term = log_term;
  const double root = std::sqrt(kappa);
  const double log_kappa = std::log(kappa);
  if (log_kappa == 0.0) {
    out.ceiling_unbounded = true;
    out.alpha_ceiling = std::numeric_limits<double>::infinity();
  } else {
    out.alpha_ceiling = 1.0 / (root * log_kappa);
    out.infeasible = alpha >= out.alpha_ceiling;
  }
  const double n = (root + alpha * log_kappa) * std::max(log_term, 0.0);
  // Values within 1e-9 of an integer snap to it before the ceiling.
  const double rounded = std::round(n);
  out.iterations = static_cast<long>(std::abs(n - rounded) <= 1e-9 * std::max(1.0, n) ? rounded
                                                                                       : std::ceil(n));
  return out;
}

Alg1Complexity alg1_complexity(double kappa, double L, double mu, double R, double eps,
                               double alpha) {
  require(mu > 0.0 && L >= mu && eps > 0.0 && R >= 0.0,
          "alg1_complexity: need L >= mu > 0, R >= 0, eps > 0");
  const double arg = (L + mu) * R * R / (2.0 * eps);
  return alg1_complexity_from_log_term(kappa, arg > 0.0 ? std::log(arg) : 0.0, alpha);
}

double primal_from_dual_bound(double eps, double kappa, double L, double mu, double norm_x_star) {
  require(mu > 0.0, "primal_from_dual_bound: need mu > 0");
  require(eps >= 0.0 && kappa >= 0.0 && L >= 0.0 && norm_x_star >= 0.0,
          "primal_from_dual_bound: inputs must be nonnegative");
  return 2.0 * kappa * eps + L * norm_x_star * std::sqrt(2.0 * eps / mu);
}

DeltaCheck delta_bound_check(const DualFunction& f_k, const DualFunction& f_next, double f_star,
                             double L, double mu, const std::vector<AgentMatrix>& points) {
  require(mu > 0.0 && L >= mu, "delta_bound_check: need L >= mu > 0");
  DeltaCheck out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double fk = f_k(points[i]);
    const double delta = f_next(points[i]) - fk;
    const double slack = (L - mu) / mu * (fk - f_star) - delta;
    if (slack < out.worst_slack) {
      out.worst_slack = slack;
      out.worst_index = static_cast<int>(i);
    }
  }
  if (points.empty()) out.worst_slack = 0.0;
  out.ok = out.worst_slack >= -1e-9;
  return out;
}

double diging_j(double kappa_bar, int n, int B) {
  const double root = std::sqrt(kappa_bar);
  return 3.0 * root * B * B * (1.0 + 4.0 * std::sqrt(static_cast<double>(n)) * root);
}

double diging_default_stepsize(double kappa_bar, int n, double mu_bar, int B) {
  require(kappa_bar >= 1.0 && n >= 1 && B >= 1 && mu_bar > 0.0,
          "diging stepsize: need kappa_bar >= 1, n >= 1, B >= 1, mu_bar > 0");
  return 1.5 / (mu_bar * (diging_j(kappa_bar, n, B) + 1.0));
}

DigingRates diging_rates(double kappa_bar, int n, int B, double delta, double mu_bar,
                         std::optional<double> alpha) {
  require(kappa_bar >= 1.0, "diging_rates: need kappa_bar >= 1");
  require(n >= 1 && B >= 1, "diging_rates: need n >= 1 and B >= 1");
  require(delta >= 0.0 && delta < 1.0, "diging_rates: need delta in [0, 1)");
  DigingRates out;
  out.lambda0 = 1.0 - 1.0 / (12.0 * std::pow(kappa_bar, 1.5) * std::sqrt(static_cast<double>(n)));
  const double J = diging_j(kappa_bar, n, B);
  out.J = J;
  if (mu_bar > 0.0) {
    const double s = std::sqrt(J * J + (1.0 - delta * delta) * J) - delta * J;
    out.alpha0 = 1.5 * s * s / (mu_bar * J * (J + 1.0) * (J + 1.0));
    out.alpha_max = 1.5 * (1.0 - delta) * (1.0 - delta) / (mu_bar * J);
  }
  if (alpha) {
    require(mu_bar > 0.0, "diging_rates: alpha given but mu_bar is not positive");
    const double a = *alpha;
    if (!(a > 0.0) || a > out.alpha_max) {
      throw ValidationError("diging_rates: alpha = " + std::to_string(a) + " outside (0, " +
                            std::to_string(out.alpha_max) + "]");
    }
    if (a <= out.alpha0) {
      out.lambda = std::pow(1.0 - a * mu_bar / 1.5, 1.0 / (2.0 * B));
      out.branch = 1;
    } else {
      out.lambda = std::pow(std::sqrt(a * mu_bar * J / 1.5) + delta, 1.0 / B);
      out.branch = 2;
    }
  }
  return out;
}

PandaRates panda_rates(double kappa, double L, double mu, double delta, int B,
                       std::optional<double> c) {
  require(kappa >= 1.0, "panda_rates: need kappa >= 1");
  require(delta >= 0.0 && delta < 1.0, "panda_rates: need delta in [0, 1)");
  require(B >= 1, "panda_rates: need B >= 1");
  PandaRates out;
  out.lambda0 = 1.0 - 9.0 / 64.0 / std::pow(kappa, 1.5);
  const double ratio = (std::sqrt((1.0 - delta * delta) * std::pow(kappa, -2.0 / 3.0) + 8.0) - 8.0 * delta) /
                       (std::pow(kappa, -1.5) + 8.0);
  out.alpha_step = 2.0 * std::sqrt(kappa) * mu * ratio * ratio;
  if (c) {
    require(L > 0.0, "panda_rates: c given but L is not positive");
    if (!(*c > 0.0) || *c > out.alpha_step) {
      throw ValidationError("panda_rates: c = " + std::to_string(*c) + " outside (0, " +
                            std::to_string(out.alpha_step) + "]");
    }
    out.lambda = std::pow(1.0 - *c / (2.0 * L), 1.0 / (2.0 * B));
  }
  return out;
}

StaticComparison static_nesterov_comparison(double lambda2, double kappa_phi, double chi) {
  require(lambda2 >= 0.0 && lambda2 <= 1.0, "static_nesterov_comparison: need lambda2 in [0, 1]");
  require(kappa_phi >= 1.0 && chi >= 1.0, "static_nesterov_comparison: need kappa_Phi, chi >= 1");
  StaticComparison out;
  out.lhs = std::pow(lambda2 * (1.0 - lambda2), 1.5) / 250.0 * std::sqrt(chi);
  out.rhs = std::pow(kappa_phi, 3.0 / 14.0);
  out.favors_alg1 = out.lhs < out.rhs;
  return out;
}

double alg1_rate(double kappa_phi, double theta_max, double theta_min) {
  require(kappa_phi >= 1.0 && theta_min > 0.0 && theta_max >= theta_min,
          "alg1_rate: need kappa_Phi >= 1 and theta_max >= theta_min > 0");
  return 1.0 - 1.0 / (std::sqrt(kappa_phi) * std::pow(theta_max / theta_min, 0.25));
}

}  // namespace tvopt
