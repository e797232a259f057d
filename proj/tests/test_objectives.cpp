#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "tvopt/algorithms.hpp"
#include "tvopt/error.hpp"
#include "tvopt/objectives.hpp"

using namespace tvopt;
using tvopt::testing::random_matrix;
using tvopt::testing::random_vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double fd_error(const LocalObjective& f, const Vector& y) {
  const double h = 1e-6;
  Vector fd(y.size());
  for (int k = 0; k < y.size(); ++k) {
    Vector e = Vector::Zero(y.size());
    e(k) = h;
    fd(k) = (f.value(y + e) - f.value(y - e)) / (2 * h);
  }
  const Vector g = f.gradient(y);
  return (fd - g).norm() / std::max(1.0, g.norm());
}

LocalObjective random_logistic(Rng& rng, int samples, int d) {
  const Eigen::MatrixXd a = random_matrix(rng, samples, d);
  Vector labels(samples);
  for (int j = 0; j < samples; ++j) labels(j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return LocalObjective::logistic(a, labels, 1.0 / (2.0 * samples), 0.05);
}

}  // namespace

TEST_CASE("quadratic conj_argmax example") {
  const LocalObjective f = LocalObjective::centered(vec({1, 0}));
  const Vector y = f.conj_argmax(vec({0, 2}));
  CHECK(std::abs(y(0) - 1) < 1e-14);
  CHECK(std::abs(y(1) - 2) < 1e-14);
  CHECK_THROWS_AS(LocalObjective::quadratic(-Eigen::MatrixXd::Identity(2, 2), Vector::Zero(2), 0), ValidationError);
}

TEST_CASE("gradients match central differences") {
  Rng rng(17);
  const AggregateObjective ridge = gen_ridge_instance(4, 6, 5, 0.1, 0.1, 3);
  const AggregateObjective logistic = gen_logistic_instance(4, 6, 5, 0.1, 3);
  for (int p = 0; p < 50; ++p) {
    const Vector y = random_vector(rng, 5);
    for (int i = 0; i < 4; ++i) {
      CHECK(fd_error(ridge.local(i), y) <= 1e-5);
      CHECK(fd_error(logistic.local(i), y) <= 1e-5);
    }
  }
  const Vector zero = Vector::Zero(5);
  for (int i = 0; i < 4; ++i) CHECK(fd_error(logistic.local(i), zero) <= 1e-6);
}

TEST_CASE("conj_argmax and gradient are mutual inverses") {
  Rng rng(23);
  std::vector<LocalObjective> locals;
  locals.push_back(LocalObjective::quadratic(tvopt::testing::random_spd(rng, 3, 0.2, 5.0), random_vector(rng, 3), 1.0));
  locals.push_back(random_logistic(rng, 12, 3));
  for (const LocalObjective& f : locals) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vector z = random_vector(rng, 3) * 0.3;
      const Vector y = f.conj_argmax(z);
      CHECK((f.gradient(y) - z).norm() <= 1e-10 * (1 + z.norm()));
      const Vector y0 = random_vector(rng, 3);
      CHECK((f.conj_argmax(f.gradient(y0)) - y0).norm() <= 1e-8 * (1 + y0.norm()));
    }
  }
}

TEST_CASE("logistic conj_argmax matches a grid search in one dimension") {
  Eigen::MatrixXd a(1, 1);
  a << 1.5;
  const LocalObjective f = LocalObjective::logistic(a, vec({1}), 1.0, 0.3);
  const double z = 0.4;
  double best_y = 0.0;
  double best = -1e300;
  for (int k = 0; k <= 2000000; ++k) {
    const double y = -10.0 + 20.0 * k / 2000000.0;
    const double v = z * y - f.value(vec({y}));
    if (v > best) {
      best = v;
      best_y = y;
    }
  }
  CHECK(std::abs(f.conj_argmax(vec({z}))(0) - best_y) <= 1e-5);
  CHECK(std::abs(f.conj_value(vec({z})) - best) <= 1e-6);
}

TEST_CASE("quadratic conjugate value closed form") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector a = random_vector(rng, 4);
    const Vector z = random_vector(rng, 4);
    const LocalObjective f = LocalObjective::centered(a);
    CHECK(std::abs(f.conj_value(z) - (z.dot(a) + 0.5 * z.squaredNorm())) <= 1e-12 * (1 + std::abs(z.dot(a))));
    const Vector zr = random_vector(rng, 4);
    CHECK(std::abs(f.conj_bregman(z, zr) - 0.5 * (z - zr).squaredNorm()) <= 1e-12);
  }
}

TEST_CASE("ridge instance constants and centralized optimum") {
  const int n = 5, l = 8, m = 4;
  const double c = 0.1;
  const AggregateObjective agg = gen_ridge_instance(n, l, m, c, 0.1, 12);
  for (int i = 0; i < n; ++i) {
    CHECK(agg.local(i).mu() >= c / n - 1e-15);
    CHECK(agg.local(i).mu() <= agg.local(i).L());
  }
  CHECK(agg.mu_phi() <= agg.L_phi());

  Eigen::MatrixXd p_sum = Eigen::MatrixXd::Zero(m, m);
  Vector q_sum = Vector::Zero(m);
  for (int i = 0; i < n; ++i) {
    p_sum += agg.local(i).as_quadratic()->p;
    q_sum += agg.local(i).as_quadratic()->q;
  }
  const CentralSolution sol = centralized_solve(agg);
  const Vector expect = p_sum.ldlt().solve(q_sum);
  CHECK((sol.y_star - expect).norm() <= 1e-8);
  CHECK(agg.gradient_at(sol.y_star).norm() <= 1e-10);
  CHECK(sol.phi_star == doctest::Approx(agg.value_at(sol.y_star)).epsilon(1e-14));
}

TEST_CASE("noise-free ridge optimum is the shrunk normal-equations solution") {
  const int n = 3, l = 10, m = 3;
  const double c = 0.1;
  const Vector x_true = vec({1, -2, 0.5});
  const AggregateObjective agg = gen_ridge_instance(n, l, m, c, 0.0, 9, x_true);
  // With b = H x_true: sum_i P_i = H^T H/(nl) + c I and sum_i q_i = H^T H x_true/(nl).
  Eigen::MatrixXd hth = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < n; ++i) hth += agg.local(i).as_quadratic()->p;
  hth -= c * Eigen::MatrixXd::Identity(m, m);
  const Vector expect = (hth + c * Eigen::MatrixXd::Identity(m, m)).ldlt().solve(hth * x_true);
  const CentralSolution sol = centralized_solve(agg);
  CHECK((sol.y_star - expect).norm() <= 1e-8);
  CHECK(sol.y_star.norm() < x_true.norm());
}

TEST_CASE("ridge generation is deterministic per seed") {
  const AggregateObjective a = gen_ridge_instance(3, 4, 2, 0.1, 0.1, 5);
  const AggregateObjective b = gen_ridge_instance(3, 4, 2, 0.1, 0.1, 5);
  const AggregateObjective c = gen_ridge_instance(3, 4, 2, 0.1, 0.1, 6);
  CHECK(a.local(1).as_quadratic()->p == b.local(1).as_quadratic()->p);
  CHECK(a.local(1).as_quadratic()->q == b.local(1).as_quadratic()->q);
  CHECK(a.local(1).as_quadratic()->q != c.local(1).as_quadratic()->q);
}

TEST_CASE("logistic instance constants") {
  const int n = 4, l = 10, m = 3;
  const double c = 0.2;
  const AggregateObjective agg = gen_logistic_instance(n, l, m, c, 8);
  for (int i = 0; i < n; ++i) {
    const LogisticTerm* t = agg.local(i).as_logistic();
    REQUIRE(t != nullptr);
    CHECK(agg.local(i).mu() == c / n);
    CHECK(t->loss_weight == 1.0 / (2.0 * n * l));
    const Eigen::MatrixXd ata = t->samples.transpose() * t->samples;
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ata).eigenvalues().maxCoeff();
    CHECK(agg.local(i).L() <= c / n + lmax / (8.0 * n * l) + 1e-14);
  }
  const CentralSolution sol = centralized_solve(agg);
  CHECK(agg.gradient_at(sol.y_star).norm() <= 1e-10);
}

TEST_CASE("sparse labeled parser") {
  std::istringstream in("+1 3:0.5 7:1\n\n-1\n0 1:2\n");
  const Dataset d = parse_sparse_labeled(in);
  REQUIRE(d.samples.size() == 3);
  CHECK(d.samples[0].label == 1);
  CHECK(d.samples[0].entries == std::vector<std::pair<int, double>>{{3, 0.5}, {7, 1.0}});
  CHECK(d.samples[1].label == -1);
  CHECK(d.samples[1].entries.empty());
  CHECK(d.samples[2].label == -1);
  CHECK(d.dimension == 7);

  auto fails_on_line = [](const std::string& text, int line) {
    std::istringstream s(text);
    try {
      parse_sparse_labeled(s);
    } catch (const ParseError& e) {
      return e.line() == line;
    }
    return false;
  };
  CHECK(fails_on_line("+1 0:1\n", 1));
  CHECK(fails_on_line("+1 1:1\n-1 2:x\n", 2));
  CHECK(fails_on_line("+1 1:1\n+1 3:1 2:1\n", 2));
  CHECK(fails_on_line("2 1:1\n", 1));
  CHECK(fails_on_line("+1 1=1\n", 1));
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(parse_sparse_labeled(empty), ParseError);
  CHECK_THROWS_AS(load_sparse_labeled("/nonexistent/file.txt"), IoError);
}

TEST_CASE("dataset file to logistic aggregate") {
  const Dataset d = load_sparse_labeled(std::filesystem::path(TVOPT_TEST_DATA) / "sample.svm");
  CHECK(d.samples.size() >= 12);
  const AggregateObjective agg = logistic_from_dataset(d, 3, 4, 0.1, 1);
  CHECK(agg.n() == 3);
  CHECK(agg.dim() == d.dimension);
  CHECK_THROWS_AS(logistic_from_dataset(d, 10, 10, 0.1, 1), ValidationError);
}

TEST_CASE("balance_strong_convexity") {
  std::vector<LocalObjective> locals;
  locals.push_back(LocalObjective::quadratic(Eigen::MatrixXd::Identity(2, 2), vec({1, 0}), 0));
  locals.push_back(LocalObjective::quadratic(3 * Eigen::MatrixXd::Identity(2, 2), vec({0, 1}), 0));
  const AggregateObjective agg(locals);
  const AggregateObjective bal = balance_strong_convexity(agg);
  CHECK(bal.local(0).mu() == doctest::Approx(2));
  CHECK(bal.local(1).mu() == doctest::Approx(2));
  const Vector y = vec({0.3, -0.7});
  CHECK(bal.local(0).value(y) == doctest::Approx(agg.local(0).value(y) + 0.5 * y.squaredNorm()).epsilon(1e-14));

  const AggregateObjective same = balance_strong_convexity(tvopt::testing::centered({1, 2, 3}));
  CHECK(same.local(1).value(vec({0.5})) == tvopt::testing::centered({1, 2, 3}).local(1).value(vec({0.5})));

  Rng rng(2);
  const AggregateObjective ridge = gen_ridge_instance(5, 4, 3, 0.1, 0.1, 77);
  const AggregateObjective ridge_bal = balance_strong_convexity(ridge);
  for (int p = 0; p < 100; ++p) {
    const Vector z = random_vector(rng, 3);
    CHECK(std::abs(ridge_bal.value_at(z) - ridge.value_at(z)) <= 1e-12 * (1 + std::abs(ridge.value_at(z))));
  }
  for (int i = 0; i < 5; ++i) CHECK(ridge_bal.local(i).mu() == doctest::Approx(ridge.mu_bar()).epsilon(1e-12));
}

TEST_CASE("centralized_solve examples") {
  CentralSolution s = centralized_solve(tvopt::testing::centered({-1, 1}));
  CHECK(std::abs(s.y_star(0)) < 1e-15);
  CHECK(s.phi_star == doctest::Approx(1.0).epsilon(1e-15));
  s = centralized_solve(AggregateObjective({LocalObjective::centered(vec({2, -3}))}));
  CHECK((s.y_star - vec({2, -3})).norm() < 1e-15);
  CHECK(std::abs(s.phi_star) < 1e-15);
}

TEST_CASE("dual_constants examples") {
  const AggregateObjective unit = tvopt::testing::centered({0, 0, 0});
  DualConstants dc = dual_constants(unit, theta_bounds(GraphSchedule::constant(1, gen_topology(TopologyKind::kPath, 3))));
  CHECK(dc.L_f == doctest::Approx(3).epsilon(1e-12));
  CHECK(dc.mu_f == doctest::Approx(1).epsilon(1e-12));
  CHECK(dc.kappa == doctest::Approx(3).epsilon(1e-12));
  dc = dual_constants(tvopt::testing::centered({0, 0}),
                      theta_bounds(GraphSchedule::constant(1, gen_topology(TopologyKind::kPath, 2))));
  CHECK(dc.L_f == doctest::Approx(2).epsilon(1e-12));
  CHECK(dc.mu_f == doctest::Approx(2).epsilon(1e-12));
  CHECK(dc.kappa == doctest::Approx(1).epsilon(1e-12));

  std::vector<LocalObjective> locals{LocalObjective::centered(vec({0})),
                                     LocalObjective::quadratic(2 * Eigen::MatrixXd::Identity(1, 1), vec({0}), 0)};
  const ThetaBounds th{9.0, 1.0};
  const DualConstants base = dual_constants(AggregateObjective({locals[0], locals[0]}), th);
  const DualConstants doubled = dual_constants(AggregateObjective(locals), th);
  CHECK(doubled.mu_f == doctest::Approx(base.mu_f / 2));
  CHECK(doubled.kappa == doctest::Approx(base.kappa * 2));
  CHECK_THROWS_AS(dual_constants(unit, ThetaBounds{1.0, 0.0}), DisconnectedGraphError);
}

TEST_CASE("dual curvature lies within the Theorem 1 constants") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const int d = 1 + static_cast<int>(rng.below(4));
    const AggregateObjective agg = tvopt::testing::random_quadratics(rng, n, d);
    const Topology t = gen_topology(TopologyKind::kErdosRenyi, n, {}, trial);
    const DualConstants dc = dual_constants(agg, theta_bounds(GraphSchedule::constant(1, t)));
    const SymMatrix root = sqrt_psd(laplacian(t));
    const AgentMatrix x = random_matrix(rng, d, n);
    const AgentMatrix gx = dual_gradient(agg, root, x);
    for (int k = 0; k < 100; ++k) {
      const AgentMatrix dir = project_consensus_orth(random_matrix(rng, d, n));
      const double curv = frobenius(dual_gradient(agg, root, x + dir) - gx, dir) / dir.squaredNorm();
      CHECK(curv >= dc.mu_f - 1e-8);
      CHECK(curv <= dc.L_f + 1e-8);
    }
  }
}
