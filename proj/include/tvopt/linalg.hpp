#pragma once

// Dense symmetric linear algebra used by the graph and dual machinery.
//
// Matrices are stored in Eigen containers; the symmetric eigensolver is a
// cyclic Jacobi implementation so that spectra (and everything derived from
// them) are bit-for-bit reproducible for identical input.

#include <Eigen/Dense>

namespace tvopt {

/// Decision variables of all agents side by side: d rows, one column per agent.
using AgentMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Exactly symmetric dense matrix with n >= 1.
class SymMatrix {
 public:
  /// Throws ValidationError unless `m` is square, non-empty and exactly symmetric.
  explicit SymMatrix(Eigen::MatrixXd m);

  static SymMatrix identity(int n);
  static SymMatrix zero(int n);

  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double frobenius_norm() const { return m_.norm(); }

 private:
  Eigen::MatrixXd m_;
};

struct Spectrum {
  Vector eigenvalues;            // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, eigenvectors.col(k) <-> eigenvalues(k)
};

/// Cyclic Jacobi eigendecomposition. Sweeps until the off-diagonal Frobenius
/// norm drops to 1e-12 * ||M||_F. Ties in the sorted order keep the column
/// order the rotations produced, so output is deterministic.
Spectrum eig_sym(const SymMatrix& m);

/// Principal square root of a PSD matrix. Eigenvalues within 1e-10 ||M||_F of
/// zero are clamped to zero; anything more negative throws NotPsdError.
SymMatrix sqrt_psd(const SymMatrix& m);

/// Moore-Penrose pseudo-inverse of a PSD matrix; eigenvalues below
/// `rel_threshold * lambda_max` are treated as zero.
SymMatrix pinv_psd(const SymMatrix& m, double rel_threshold = 1e-9);

/// Removes the component along the all-ones direction from every row
/// (row means become zero). Idempotent.
AgentMatrix project_consensus_orth(const AgentMatrix& x);

/// Sum_ij X_ij Y_ij. Throws ValidationError on shape mismatch.
double frobenius(const AgentMatrix& x, const AgentMatrix& y);

/// Largest singular value, via the Jacobi solver on A^T A.
double operator_norm(const Eigen::MatrixXd& a);

}  // namespace tvopt
