#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tvopt/graphs.hpp"
#include "tvopt/objectives.hpp"
#include "tvopt/random.hpp"

namespace tvopt::testing {

inline Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

inline Vector random_vector(Rng& rng, int d) { return random_matrix(rng, d, 1).col(0); }

/// SPD matrix with eigenvalues spread over [lo, hi].
inline Eigen::MatrixXd random_spd(Rng& rng, int d, double lo, double hi) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rng, d, d));
  const Eigen::MatrixXd q = qr.householderQ();
  Vector eig(d);
  for (int i = 0; i < d; ++i) eig(i) = d == 1 ? lo : lo + (hi - lo) * i / (d - 1);
  Eigen::MatrixXd p = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (p + p.transpose());
}

/// Quadratic locals with curvature in [lo, hi] and random linear terms.
inline AggregateObjective random_quadratics(Rng& rng, int n, int d, double lo = 0.5, double hi = 3.0) {
  std::vector<LocalObjective> locals;
  for (int i = 0; i < n; ++i) {
    const double a = lo + (hi - lo) * rng.uniform() * 0.3;
    const double b = hi - (hi - lo) * rng.uniform() * 0.3;
    locals.push_back(LocalObjective::quadratic(random_spd(rng, d, a, b), random_vector(rng, d), 0.0));
  }
  return AggregateObjective(std::move(locals));
}

/// Quadratics that all attain their minimum at y_star, so the dual minimiser is X* = 0.
inline AggregateObjective shared_minimizer_quadratics(Rng& rng, int n, int d, const Vector& y_star,
                                                      double lo = 0.5, double hi = 3.0) {
  std::vector<LocalObjective> locals;
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd p = random_spd(rng, d, lo + 0.2 * rng.uniform(), hi - 0.2 * rng.uniform());
    locals.push_back(LocalObjective::quadratic(p, p * y_star, 0.0));
  }
  return AggregateObjective(std::move(locals));
}

inline AggregateObjective centered(const std::vector<double>& a) {
  std::vector<LocalObjective> locals;
  for (double v : a) locals.push_back(LocalObjective::centered(Vector::Constant(1, v)));
  return AggregateObjective(std::move(locals));
}

}  // namespace tvopt::testing
