#include "tvopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "tvopt/error.hpp"

namespace tvopt {

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw ValidationError("SymMatrix: expected a non-empty square matrix, got " +
                          std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
      if (m_(i, j) != m_(j, i)) {
        throw ValidationError("SymMatrix: entries (" + std::to_string(i) + "," +
                              std::to_string(j) + ") and their transpose differ");
      }
    }
  }
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }

SymMatrix SymMatrix::zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

// Mirrors the upper triangle so the result is exactly symmetric.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd r = a;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < r.cols(); ++j) {
      const double v = 0.5 * (r(i, j) + r(j, i));
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

}  // namespace

Spectrum eig_sym(const SymMatrix& m) {
  const int n = m.size();
  Eigen::MatrixXd a = m.matrix();
  if (!a.allFinite()) throw ValidationError("eig_sym: matrix has non-finite entries");

  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = 1e-12 * a.norm();
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle from the classical Jacobi formula (Golub & Van Loan 8.5).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]);
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

SymMatrix sqrt_psd(const SymMatrix& m) {
  const Spectrum s = eig_sym(m);
  const double tol = 1e-10 * m.frobenius_norm();
  Vector root(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < root.size(); ++k) {
    const double lambda = s.eigenvalues(k);
    if (lambda < -tol) {
      throw NotPsdError("sqrt_psd: eigenvalue " + std::to_string(lambda) +
                        " is below the PSD tolerance");
    }
    root(k) = lambda > tol ? std::sqrt(lambda) : 0.0;
  }
  const Eigen::MatrixXd r = s.eigenvectors * root.asDiagonal() * s.eigenvectors.transpose();
  return SymMatrix(symmetrize(r));
}

SymMatrix pinv_psd(const SymMatrix& m, double rel_threshold) {
  const Spectrum s = eig_sym(m);
  const double top = s.eigenvalues.cwiseAbs().maxCoeff();
  Vector inv(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < inv.size(); ++k) {
    const double lambda = s.eigenvalues(k);
    inv(k) = (top > 0.0 && lambda > rel_threshold * top) ? 1.0 / lambda : 0.0;
  }
  const Eigen::MatrixXd r = s.eigenvectors * inv.asDiagonal() * s.eigenvectors.transpose();
  return SymMatrix(symmetrize(r));
}

AgentMatrix project_consensus_orth(const AgentMatrix& x) {
  if (x.cols() == 0) return x;
  AgentMatrix out = x;
  out.colwise() -= x.rowwise().mean();
  return out;
}

double frobenius(const AgentMatrix& x, const AgentMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ValidationError("frobenius: shape mismatch " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()) + " vs " + std::to_string(y.rows()) + "x" +
                          std::to_string(y.cols()));
  }
  return (x.array() * y.array()).sum();
}

double operator_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Spectrum s = eig_sym(SymMatrix(symmetrize(gram)));
  return std::sqrt(std::max(0.0, s.eigenvalues(s.eigenvalues.size() - 1)));
}

}  // namespace tvopt
