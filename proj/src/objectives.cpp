#include "tvopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvopt/error.hpp"
#include "tvopt/random.hpp"

namespace tvopt {

namespace {

constexpr int kNewtonCap = 100;

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

// 1 / (1 + exp(-t)) without overflow.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

Eigen::MatrixXd symmetrized_or_throw(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols() || p.rows() < 1) throw ValidationError("quadratic: P must be square");
  const double asym = (p - p.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, p.norm())) throw ValidationError("quadratic: P is not symmetric");
  Eigen::MatrixXd s = 0.5 * (p + p.transpose());
  return s;
}

// Damped Newton on g(y) = phi(y) - <z, y>.
Vector newton_conj(const LocalObjective& obj, const Vector& z) {
  const double tol = 1e-10 * (1.0 + z.norm());
  Vector y = Vector::Zero(obj.dim());
  double g_val = obj.value(y) - z.dot(y);
  Vector grad = obj.gradient(y) - z;
  for (int it = 0; it < kNewtonCap; ++it) {
    if (grad.norm() <= tol) return y;
    const Vector dir = -obj.hessian(y).llt().solve(grad);
    const double slope = grad.dot(dir);
    double t = 1.0;
    // Decrease is below rounding; the full step is in the quadratic convergence region.
    bool accepted = -slope <= 1e-13 * (1.0 + std::abs(g_val));
    if (accepted) {
      y += dir;
      g_val = obj.value(y) - z.dot(y);
    }
    for (int ls = 0; !accepted && ls < 50; ++ls) {
      const Vector cand = y + t * dir;
      const double cand_val = obj.value(cand) - z.dot(cand);
      if (cand_val <= g_val + 1e-4 * t * slope) {
        y = cand;
        g_val = cand_val;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      y += dir;
      g_val = obj.value(y) - z.dot(y);
    }
    grad = obj.gradient(y) - z;
  }
  if (grad.norm() <= tol) return y;
  throw SolverError("conj_argmax: Newton did not converge in " + std::to_string(kNewtonCap) +
                        " steps",
                    grad.norm());
}

}  // namespace

LocalObjective::LocalObjective(Term term) : term_(std::move(term)) {
  if (const auto* q = std::get_if<QuadraticTerm>(&term_)) {
    dim_ = static_cast<int>(q->p.rows());
    const Spectrum s = eig_sym(SymMatrix(q->p));
    mu_ = s.eigenvalues(0);
    L_ = s.eigenvalues(dim_ - 1);
    if (!(mu_ > 0.0)) throw ValidationError("quadratic: P must be positive definite");
    llt_.compute(q->p);
  } else {
    const auto& lg = std::get<LogisticTerm>(term_);
    dim_ = static_cast<int>(lg.samples.cols());
    mu_ = lg.ridge;
    double top = 0.0;
    if (lg.samples.rows() > 0) {
      const Eigen::MatrixXd gram = lg.samples.transpose() * lg.samples;
      top = eig_sym(SymMatrix(symmetrized_or_throw(gram))).eigenvalues(dim_ - 1);
    }
    L_ = lg.ridge + 0.25 * lg.loss_weight * top;
  }
}

LocalObjective LocalObjective::quadratic(Eigen::MatrixXd p, Vector q, double r) {
  Eigen::MatrixXd sym = symmetrized_or_throw(p);
  if (q.size() != sym.rows()) throw ValidationError("quadratic: q has the wrong dimension");
  return LocalObjective(QuadraticTerm{std::move(sym), std::move(q), r});
}

LocalObjective LocalObjective::centered(const Vector& center) {
  const auto d = center.size();
  if (d < 1) throw ValidationError("centered: empty center");
  return quadratic(Eigen::MatrixXd::Identity(d, d), center, 0.5 * center.squaredNorm());
}

LocalObjective LocalObjective::logistic(Eigen::MatrixXd samples, Vector labels, double loss_weight,
                                        double ridge) {
  if (samples.cols() < 1) throw ValidationError("logistic: need at least one feature");
  if (samples.rows() != labels.size()) throw ValidationError("logistic: label count mismatch");
  if (!(ridge > 0.0)) throw ValidationError("logistic: ridge coefficient must be positive");
  if (!(loss_weight >= 0.0)) throw ValidationError("logistic: loss weight must be nonnegative");
  for (Eigen::Index j = 0; j < labels.size(); ++j) {
    if (labels(j) != 1.0 && labels(j) != -1.0) throw ValidationError("logistic: labels must be +-1");
  }
  return LocalObjective(LogisticTerm{std::move(samples), std::move(labels), loss_weight, ridge});
}

ObjectiveKind LocalObjective::kind() const {
  return std::holds_alternative<QuadraticTerm>(term_) ? ObjectiveKind::kQuadratic
                                                      : ObjectiveKind::kLogistic;
}

double LocalObjective::value(const Vector& y) const {
  if (const auto* q = as_quadratic()) return 0.5 * y.dot(q->p * y) - q->q.dot(y) + q->r;
  const auto& lg = *as_logistic();
  const Vector margins = lg.samples * y;
  double loss = 0.0;
  for (Eigen::Index j = 0; j < margins.size(); ++j) loss += softplus(-lg.labels(j) * margins(j));
  return lg.loss_weight * loss + 0.5 * lg.ridge * y.squaredNorm();
}

Vector LocalObjective::gradient(const Vector& y) const {
  if (const auto* q = as_quadratic()) return q->p * y - q->q;
  const auto& lg = *as_logistic();
  const Vector margins = lg.samples * y;
  Vector coef(margins.size());
  for (Eigen::Index j = 0; j < margins.size(); ++j) {
    coef(j) = -lg.labels(j) * sigmoid(-lg.labels(j) * margins(j));
  }
  return lg.loss_weight * (lg.samples.transpose() * coef) + lg.ridge * y;
}

Eigen::MatrixXd LocalObjective::hessian(const Vector& y) const {
  if (const auto* q = as_quadratic()) return q->p;
  const auto& lg = *as_logistic();
  const Vector margins = lg.samples * y;
  Vector curv(margins.size());
  for (Eigen::Index j = 0; j < margins.size(); ++j) {
    const double s = sigmoid(margins(j));
    curv(j) = s * (1.0 - s);
  }
  Eigen::MatrixXd h = lg.loss_weight * (lg.samples.transpose() * curv.asDiagonal() * lg.samples);
  h.diagonal().array() += lg.ridge;
  return h;
}

Vector LocalObjective::conj_argmax(const Vector& z) const {
  if (z.size() != dim_) throw ValidationError("conj_argmax: dimension mismatch");
  if (!z.allFinite()) throw ValidationError("conj_argmax: non-finite input");
  if (const auto* q = as_quadratic()) {
    const Vector rhs = z + q->q;
    Vector y = llt_.solve(rhs);
    const double tol = 1e-10 * (1.0 + z.norm());
    Vector residual = rhs - q->p * y;
    for (int refine = 0; refine < 3 && residual.norm() > tol; ++refine) {
      y += llt_.solve(residual);
      residual = rhs - q->p * y;
    }
    if (residual.norm() > tol) throw SolverError("conj_argmax: linear solve inaccurate", residual.norm());
    return y;
  }
  return newton_conj(*this, z);
}

double LocalObjective::conj_value(const Vector& z) const {
  const Vector y = conj_argmax(z);
  return z.dot(y) - value(y);
}

double LocalObjective::conj_bregman(const Vector& z, const Vector& z_ref) const {
  if (as_quadratic() != nullptr) {
    const Vector dz = z - z_ref;
    return 0.5 * dz.dot(llt_.solve(dz));
  }
  const Vector y_ref = conj_argmax(z_ref);
  return conj_value(z) - conj_value(z_ref) - y_ref.dot(z - z_ref);
}

LocalObjective LocalObjective::with_added_ridge(double shift) const {
  if (const auto* q = as_quadratic()) {
    Eigen::MatrixXd p = q->p;
    p.diagonal().array() += shift;
    return quadratic(std::move(p), q->q, q->r);
  }
  const auto& lg = *as_logistic();
  return logistic(lg.samples, lg.labels, lg.loss_weight, lg.ridge + shift);
}

AggregateObjective::AggregateObjective(std::vector<LocalObjective> locals)
    : locals_(std::move(locals)) {
  if (locals_.empty()) throw ValidationError("AggregateObjective: no agents");
  mu_phi_ = locals_.front().mu();
  L_phi_ = locals_.front().L();
  for (const auto& l : locals_) {
    if (l.dim() != locals_.front().dim()) throw ValidationError("AggregateObjective: dimension mismatch");
    mu_phi_ = std::min(mu_phi_, l.mu());
    L_phi_ = std::max(L_phi_, l.L());
  }
}

bool AggregateObjective::all_quadratic() const {
  return std::all_of(locals_.begin(), locals_.end(),
                     [](const LocalObjective& l) { return l.kind() == ObjectiveKind::kQuadratic; });
}

double AggregateObjective::mu_bar() const {
  double s = 0.0;
  for (const auto& l : locals_) s += l.mu();
  return s / n();
}

double AggregateObjective::kappa_bar() const {
  double s = 0.0;
  for (const auto& l : locals_) s += l.L() / l.mu();
  return s / n();
}

double AggregateObjective::value(const AgentMatrix& y) const {
  double s = 0.0;
  for (int i = 0; i < n(); ++i) s += locals_[i].value(y.col(i));
  return s;
}

double AggregateObjective::value_at(const Vector& y) const {
  double s = 0.0;
  for (const auto& l : locals_) s += l.value(y);
  return s;
}

Vector AggregateObjective::gradient_at(const Vector& y) const {
  Vector g = Vector::Zero(dim());
  for (const auto& l : locals_) g += l.gradient(y);
  return g;
}

AgentMatrix AggregateObjective::gradients(const AgentMatrix& x) const {
  AgentMatrix g(dim(), n());
  for (int i = 0; i < n(); ++i) g.col(i) = locals_[i].gradient(x.col(i));
  return g;
}

AgentMatrix AggregateObjective::conj_argmax(const AgentMatrix& z) const {
  AgentMatrix y(dim(), n());
  for (int i = 0; i < n(); ++i) y.col(i) = locals_[i].conj_argmax(z.col(i));
  return y;
}

double AggregateObjective::conj_value(const AgentMatrix& z) const {
  double s = 0.0;
  for (int i = 0; i < n(); ++i) s += locals_[i].conj_value(z.col(i));
  return s;
}

AggregateObjective gen_ridge_instance(int n, int l, int m, double c, double noise,
                                      std::uint64_t seed, const std::optional<Vector>& x_true) {
  if (n < 1 || l < 1 || m < 1) throw ValidationError("gen_ridge_instance: counts must be >= 1");
  if (c < 0.0 || noise < 0.0) throw ValidationError("gen_ridge_instance: c and noise must be >= 0");
  Rng rng(seed);
  Vector xt(m);
  if (x_true) {
    if (x_true->size() != m) throw ValidationError("gen_ridge_instance: x_true has the wrong size");
    xt = *x_true;
  } else {
    for (int k = 0; k < m; ++k) xt(k) = rng.normal();
  }
  const double scale = 1.0 / (static_cast<double>(n) * l);
  std::vector<LocalObjective> locals;
  locals.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd h(l, m);
    for (int r = 0; r < l; ++r) {
      for (int k = 0; k < m; ++k) h(r, k) = rng.normal();
    }
    Vector b = h * xt;
    for (int r = 0; r < l; ++r) b(r) += noise * rng.normal();
    Eigen::MatrixXd p = scale * (h.transpose() * h);
    p.diagonal().array() += c / n;
    locals.push_back(LocalObjective::quadratic(std::move(p), scale * (h.transpose() * b),
                                               0.5 * scale * b.squaredNorm()));
  }
  return AggregateObjective(std::move(locals));
}

AggregateObjective gen_logistic_instance(int n, int l, int m, double c, std::uint64_t seed) {
  if (n < 1 || l < 1 || m < 1) throw ValidationError("gen_logistic_instance: counts must be >= 1");
  if (!(c > 0.0)) throw ValidationError("gen_logistic_instance: c must be > 0");
  Rng rng(seed);
  Vector u(m);
  for (int k = 0; k < m; ++k) u(k) = rng.normal();
  if (u.norm() == 0.0) u(0) = 1.0;
  u.normalize();
  const double weight = 1.0 / (2.0 * n * l);
  std::vector<LocalObjective> locals;
  locals.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd a(l, m);
    Vector y(l);
    for (int r = 0; r < l; ++r) {
      y(r) = rng.uniform() < 0.5 ? 1.0 : -1.0;
      for (int k = 0; k < m; ++k) a(r, k) = 2.0 * y(r) * u(k) + rng.normal();
    }
    locals.push_back(LocalObjective::logistic(std::move(a), std::move(y), weight, c / n));
  }
  return AggregateObjective(std::move(locals));
}

AggregateObjective logistic_from_dataset(const Dataset& data, int n, int l, double c,
                                         std::uint64_t seed) {
  if (n < 1 || l < 1) throw ValidationError("logistic_from_dataset: counts must be >= 1");
  if (!(c > 0.0)) throw ValidationError("logistic_from_dataset: c must be > 0");
  const std::size_t need = static_cast<std::size_t>(n) * l;
  if (need > data.samples.size()) {
    throw ValidationError("logistic_from_dataset: " + std::to_string(need) + " samples needed, " +
                          std::to_string(data.samples.size()) + " available");
  }
  std::vector<std::size_t> order(data.samples.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  Rng rng(seed);
  for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);

  const int m = std::max(1, data.dimension);
  const double weight = 1.0 / (2.0 * n * l);
  std::vector<LocalObjective> locals;
  locals.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(l, m);
    Vector y(l);
    for (int r = 0; r < l; ++r) {
      const SparseSample& s = data.samples[order[static_cast<std::size_t>(i) * l + r]];
      y(r) = s.label;
      for (const auto& [idx, val] : s.entries) a(r, idx - 1) = val;
    }
    locals.push_back(LocalObjective::logistic(std::move(a), std::move(y), weight, c / n));
  }
  return AggregateObjective(std::move(locals));
}

AggregateObjective balance_strong_convexity(const AggregateObjective& agg) {
  const double target = agg.mu_bar();
  std::vector<LocalObjective> locals;
  locals.reserve(agg.n());
  for (const auto& l : agg.locals()) {
    locals.push_back(l.mu() == target ? l : l.with_added_ridge(target - l.mu()));
  }
  return AggregateObjective(std::move(locals));
}

CentralSolution centralized_solve(const AggregateObjective& agg, double tol) {
  if (!(tol > 0.0)) throw ValidationError("centralized_solve: tol must be > 0");
  const int d = agg.dim();
  Vector y = Vector::Zero(d);

  if (agg.all_quadratic()) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    Vector q = Vector::Zero(d);
    for (const auto& l : agg.locals()) {
      p += l.as_quadratic()->p;
      q += l.as_quadratic()->q;
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(p);
    y = llt.solve(q);
    for (int refine = 0; refine < 3; ++refine) {
      const Vector r = q - p * y;
      if (r.norm() <= tol) break;
      y += llt.solve(r);
    }
    const double res = (p * y - q).norm();
    if (res > tol) throw SolverError("centralized_solve: closed form missed tolerance", res);
    return {y, agg.value_at(y)};
  }

  constexpr int kCap = 200;
  for (int it = 0; it < kCap; ++it) {
    const Vector g = agg.gradient_at(y);
    if (g.norm() <= tol) return {y, agg.value_at(y)};
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (const auto& l : agg.locals()) h += l.hessian(y);
    const Vector dir = -h.llt().solve(g);
    const double f0 = agg.value_at(y);
    const double slope = g.dot(dir);
    double t = 1.0;
    bool accepted = -slope <= 1e-13 * (1.0 + std::abs(f0));
    for (int ls = 0; !accepted && ls < 50; ++ls) {
      if (agg.value_at(y + t * dir) <= f0 + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    y += (accepted ? t : 1.0) * dir;
  }
  const double res = agg.gradient_at(y).norm();
  if (res <= tol) return {y, agg.value_at(y)};
  throw SolverError("centralized_solve: Newton iteration cap exceeded", res);
}

DualConstants dual_constants(const AggregateObjective& agg, const ThetaBounds& theta) {
  if (!(theta.theta_min > 0.0)) {
    throw DisconnectedGraphError("dual_constants: theta_min <= 0, schedule is not connected");
  }
  DualConstants dc;
  dc.mu_f = std::sqrt(theta.theta_min) / agg.L_phi();
  dc.L_f = std::sqrt(theta.theta_max) / agg.mu_phi();
  dc.kappa = dc.L_f / dc.mu_f;
  return dc;
}

}  // namespace tvopt
