#pragma once

// Local objectives phi_i held by each agent, their aggregate Phi(Y) = sum_i phi_i(y_i),
// and the derived dual constants.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "tvopt/graphs.hpp"
#include "tvopt/linalg.hpp"

namespace tvopt {

enum class ObjectiveKind { kQuadratic, kLogistic };

/// phi(y) = 1/2 y^T P y - q^T y + r with P symmetric positive definite.
struct QuadraticTerm {
  Eigen::MatrixXd p;
  Vector q;
  double r = 0.0;
};

/// phi(y) = loss_weight * sum_j log(1 + exp(-labels_j * a_j^T y)) + ridge/2 ||y||^2,
/// where a_j is row j of `samples`.
struct LogisticTerm {
  Eigen::MatrixXd samples;
  Vector labels;  // entries in {-1, +1}
  double loss_weight = 1.0;
  double ridge = 0.0;
};

class LocalObjective {
 public:
  /// Throws ValidationError unless P is symmetric positive definite.
  static LocalObjective quadratic(Eigen::MatrixXd p, Vector q, double r);
  /// 1/2 ||y - center||^2.
  static LocalObjective centered(const Vector& center);
  /// Requires ridge > 0, loss_weight >= 0 and labels in {-1,+1}.
  static LocalObjective logistic(Eigen::MatrixXd samples, Vector labels, double loss_weight,
                                 double ridge);

  ObjectiveKind kind() const;
  int dim() const { return dim_; }
  double mu() const { return mu_; }
  double L() const { return L_; }
  const QuadraticTerm* as_quadratic() const { return std::get_if<QuadraticTerm>(&term_); }
  const LogisticTerm* as_logistic() const { return std::get_if<LogisticTerm>(&term_); }

  double value(const Vector& y) const;
  Vector gradient(const Vector& y) const;
  Eigen::MatrixXd hessian(const Vector& y) const;

  /// argmax_y <z, y> - phi(y), i.e. the y with grad phi(y) = z. Quadratics use the
  /// cached factorisation; logistic terms run damped Newton (tolerance
  /// 1e-10 (1 + ||z||), at most 100 steps) and throw SolverError on failure.
  Vector conj_argmax(const Vector& z) const;
  /// phi*(z) = <z, y(z)> - phi(y(z)).
  double conj_value(const Vector& z) const;
  /// phi*(z) - phi*(z_ref) - <y(z_ref), z - z_ref>, exact for quadratics.
  double conj_bregman(const Vector& z, const Vector& z_ref) const;

  /// Copy with `shift`/2 ||y||^2 added (shift may be negative as long as the
  /// result stays strongly convex).
  LocalObjective with_added_ridge(double shift) const;

 private:
  using Term = std::variant<QuadraticTerm, LogisticTerm>;
  explicit LocalObjective(Term term);

  Term term_;
  int dim_ = 0;
  double mu_ = 0.0;
  double L_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;  // quadratic only
};

class AggregateObjective {
 public:
  /// Requires at least one local and a common dimension.
  explicit AggregateObjective(std::vector<LocalObjective> locals);

  int n() const { return static_cast<int>(locals_.size()); }
  int dim() const { return locals_.front().dim(); }
  const std::vector<LocalObjective>& locals() const { return locals_; }
  const LocalObjective& local(int i) const { return locals_[i]; }
  bool all_quadratic() const;

  double mu_phi() const { return mu_phi_; }  // min_i mu_i
  double L_phi() const { return L_phi_; }    // max_i L_i
  double kappa_phi() const { return L_phi_ / mu_phi_; }
  double mu_bar() const;     // (1/n) sum mu_i
  double kappa_bar() const;  // (1/n) sum L_i / mu_i

  /// Phi(Y) = sum_i phi_i(y_i).
  double value(const AgentMatrix& y) const;
  /// phi(y) = sum_i phi_i(y), the centralised objective.
  double value_at(const Vector& y) const;
  Vector gradient_at(const Vector& y) const;
  /// Column i is grad phi_i(x_i).
  AgentMatrix gradients(const AgentMatrix& x) const;
  /// Column i is conj_argmax of agent i at z_i.
  AgentMatrix conj_argmax(const AgentMatrix& z) const;
  /// Phi*(Z) = sum_i phi_i*(z_i).
  double conj_value(const AgentMatrix& z) const;

 private:
  std::vector<LocalObjective> locals_;
  double mu_phi_ = 0.0;
  double L_phi_ = 0.0;
};

/// Ridge regression split over n agents (l rows each, m features):
/// phi_i(x) = 1/(2nl) ||b_i - H_i x||^2 + c/(2n) ||x||^2 with H ~ N(0,1),
/// b = H x_true + eps, eps ~ N(0, noise^2). x_true ~ N(0, I) unless given.
AggregateObjective gen_ridge_instance(int n, int l, int m, double c = 0.1, double noise = 0.1,
                                      std::uint64_t seed = 0,
                                      const std::optional<Vector>& x_true = std::nullopt);

/// Regularised logistic regression with loss weight 1/(2nl) and ridge c/n per
/// agent. Samples come from two unit-variance Gaussians centred at +-2u for a
/// random unit vector u; the label is the sign of the centre.
AggregateObjective gen_logistic_instance(int n, int l, int m, double c = 0.1,
                                         std::uint64_t seed = 0);

struct SparseSample {
  std::vector<std::pair<int, double>> entries;  // 1-based feature index, ascending
  int label = 1;                                // -1 or +1
};

struct Dataset {
  std::vector<SparseSample> samples;
  int dimension = 0;  // largest feature index seen
};

/// Parses `label idx:val idx:val ...` lines. Labels 0/1 and -1/+1 are accepted
/// (0 maps to -1). Blank lines are skipped; errors carry the line number.
Dataset parse_sparse_labeled(std::istream& in);
Dataset load_sparse_labeled(const std::filesystem::path& path);

/// Assigns every agent `l` distinct random samples and builds the logistic locals.
AggregateObjective logistic_from_dataset(const Dataset& data, int n, int l, double c,
                                         std::uint64_t seed);

/// Adds (mu_bar - mu_i)/2 ||y||^2 to each local so all share mu_bar. The sum is unchanged.
AggregateObjective balance_strong_convexity(const AggregateObjective& agg);

struct CentralSolution {
  Vector y_star;
  double phi_star = 0.0;
};

/// Minimises sum_i phi_i. Quadratics in closed form; otherwise damped Newton
/// until ||grad|| <= tol (SolverError after 200 steps).
CentralSolution centralized_solve(const AggregateObjective& agg, double tol = 1e-10);

struct DualConstants {
  double mu_f = 0.0;
  double L_f = 0.0;
  double kappa = 0.0;
};

/// mu_f = sqrt(theta_min)/L_Phi, L_f = sqrt(theta_max)/mu_Phi.
DualConstants dual_constants(const AggregateObjective& agg, const ThetaBounds& theta);

}  // namespace tvopt
