#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "test_util.hpp"
#include "tvopt/error.hpp"
#include "tvopt/linalg.hpp"

using namespace tvopt;
using tvopt::testing::random_matrix;

namespace {

SymMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd m(n, n);
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return SymMatrix(m);
}

SymMatrix random_sym(Rng& rng, int n) {
  const Eigen::MatrixXd a = random_matrix(rng, n, n);
  return SymMatrix(0.5 * (a + a.transpose()));
}

}  // namespace

TEST_CASE("SymMatrix rejects asymmetric, empty and non-square input") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2.0000001, 1;
  CHECK_THROWS_AS(SymMatrix{m}, ValidationError);
  CHECK_THROWS_AS(SymMatrix{Eigen::MatrixXd(0, 0)}, ValidationError);
  CHECK_THROWS_AS(SymMatrix{Eigen::MatrixXd::Zero(2, 3)}, ValidationError);
  CHECK(SymMatrix::identity(3).size() == 3);
}

TEST_CASE("eig_sym worked examples") {
  auto s = eig_sym(sym({{2, 0}, {0, 1}}));
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));

  s = eig_sym(sym({{1, -1}, {-1, 1}}));
  CHECK(std::abs(s.eigenvalues(0)) < 1e-14);
  CHECK(s.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));

  s = eig_sym(sym({{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}}));
  CHECK(std::abs(s.eigenvalues(0)) < 1e-14);
  CHECK(s.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s.eigenvalues(2) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("eig_sym rejects non-finite entries") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(eig_sym(SymMatrix(m)), ValidationError);
}

TEST_CASE("eig_sym agrees with an independent solver and reconstructs up to n = 64") {
  Rng rng(11);
  for (int n : {1, 2, 3, 5, 8, 13, 21, 34, 64}) {
    const SymMatrix m = random_sym(rng, n);
    const Spectrum s = eig_sym(m);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m.matrix());
    const double scale = m.frobenius_norm();
    CHECK((s.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    for (int i = 0; i + 1 < n; ++i) CHECK(s.eigenvalues(i) <= s.eigenvalues(i + 1));
    const Eigen::MatrixXd q = s.eigenvectors;
    const Eigen::MatrixXd rebuilt = q * s.eigenvalues.asDiagonal() * q.transpose();
    CHECK((rebuilt - m.matrix()).norm() <= 1e-10 * scale);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-10);
  }
}

TEST_CASE("eig_sym is deterministic") {
  Rng rng(5);
  const SymMatrix m = random_sym(rng, 9);
  const Spectrum a = eig_sym(m);
  const Spectrum b = eig_sym(m);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("sqrt_psd examples and errors") {
  CHECK(sqrt_psd(SymMatrix::identity(4)).matrix().isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-14));
  CHECK(sqrt_psd(SymMatrix::zero(3)).matrix().norm() == 0.0);
  const SymMatrix r = sqrt_psd(sym({{1, -1}, {-1, 1}}));
  const double h = std::sqrt(2.0) / 2.0;
  CHECK(std::abs(r(0, 0) - h) < 1e-14);
  CHECK(std::abs(r(0, 1) + h) < 1e-14);
  CHECK_THROWS_AS(sqrt_psd(sym({{1, 0}, {0, -1}})), NotPsdError);
}

TEST_CASE("sqrt_psd squares back on random PSD matrices") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial;
    const Eigen::MatrixXd a = random_matrix(rng, n, n - 1);
    const Eigen::MatrixXd prod = a * a.transpose();
    const Eigen::MatrixXd sym_m = 0.5 * (prod + prod.transpose());
    const SymMatrix root = sqrt_psd(SymMatrix(sym_m));
    CHECK((root.matrix() * root.matrix() - sym_m).norm() <= 1e-9 * sym_m.norm());
    CHECK(eig_sym(root).eigenvalues.minCoeff() >= -1e-12);
  }
}

TEST_CASE("pinv_psd is a pseudo-inverse") {
  const SymMatrix w = sym({{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}});
  const Eigen::MatrixXd p = pinv_psd(w).matrix();
  CHECK((w.matrix() * p * w.matrix() - w.matrix()).norm() < 1e-12);
  CHECK((p * w.matrix() * p - p).norm() < 1e-12);
  CHECK(std::abs(p.sum()) < 1e-12);
}

TEST_CASE("project_consensus_orth examples and properties") {
  CHECK(project_consensus_orth(Eigen::MatrixXd::Constant(3, 4, 2.5)).norm() < 1e-15);
  Eigen::MatrixXd x(1, 2);
  x << 1, -1;
  CHECK(project_consensus_orth(x) == x);
  x << 2, 0;
  Eigen::MatrixXd expect(1, 2);
  expect << 1, -1;
  CHECK(project_consensus_orth(x) == expect);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd y = random_matrix(rng, 3, 6);
    const Eigen::MatrixXd p = project_consensus_orth(y);
    CHECK((project_consensus_orth(p) - p).norm() < 1e-14);
    const Eigen::MatrixXd equal_cols = random_matrix(rng, 3, 1).replicate(1, 6);
    CHECK(std::abs(frobenius(p, equal_cols)) <= 1e-10);
  }
}

TEST_CASE("frobenius examples, self-duality and operator-norm inequality") {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK(frobenius(i2, i2) == 2.0);
  CHECK(frobenius(i2, Eigen::MatrixXd::Zero(2, 2)) == 0.0);
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 3, 4;
  CHECK(frobenius(x, x) == 30.0);
  CHECK_THROWS_AS(frobenius(x, Eigen::MatrixXd::Zero(2, 3)), ValidationError);

  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::MatrixXd y = random_matrix(rng, 4, 5);
    const Eigen::MatrixXd unit = y / y.norm();
    CHECK(frobenius(unit, y) == doctest::Approx(y.norm()).epsilon(1e-13));
    for (int s = 0; s < 5; ++s) {
      const Eigen::MatrixXd other = random_matrix(rng, 4, 5);
      CHECK(frobenius(other / other.norm(), y) <= y.norm() + 1e-12);
    }
    const Eigen::MatrixXd xm = random_matrix(rng, 4, 6);
    const Eigen::MatrixXd a = random_matrix(rng, 6, 5);
    const double op = operator_norm(xm);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(xm);
    CHECK(op == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
    CHECK((xm * a).norm() <= op * a.norm() * (1 + 1e-12));
  }
}
