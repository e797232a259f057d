#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "tvopt/error.hpp"
#include "tvopt/random.hpp"
#include "tvopt/theory.hpp"

using namespace tvopt;

TEST_CASE("gd_iterations examples") {
  CHECK(gd_iterations(3, 1, std::exp(1.0), 1.0) == 2);
  CHECK(gd_iterations(3, 1, 1.0, 1.0) == 0);
  CHECK(gd_iterations(3, 1, 0.5, 1.0) == 0);
  CHECK(gd_iterations(2, 2, 10.0, 1.0) == 1);
  CHECK_THROWS_AS(gd_iterations(1, 2, 10.0, 1.0), ValidationError);
  CHECK_THROWS_AS(gd_iterations(3, 1, 10.0, 0.0), ValidationError);
  CHECK(gd_contraction(3, 1) == 0.5);
}

TEST_CASE("gd_iterations grows logarithmically") {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const double mu = 0.1 + rng.uniform();
    const double L = mu * (1.0 + 50.0 * rng.uniform());
    const double ratio = 1.0 + 1e3 * rng.uniform();
    const long a = gd_iterations(L, mu, ratio, 1.0);
    const long b = gd_iterations(L, mu, 2.0 * ratio, 1.0);
    const long step = static_cast<long>(std::ceil(std::log(2.0) / std::log((L + mu) / (L - mu))));
    CHECK(b >= a);
    CHECK(b <= a + step + 1);
    // The guarantee: q^N R <= eps.
    CHECK(std::pow(gd_contraction(L, mu), static_cast<double>(a)) * ratio <= 1.0 * (1 + 1e-12));
  }
}

TEST_CASE("nesterov_tv_bound examples") {
  CHECK(nesterov_tv_bound(2, 0.5, 1, 1, 2) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(nesterov_tv_bound(3, 1, 2, 0, 0) == doctest::Approx(8).epsilon(1e-15));
  CHECK(nesterov_tv_bound(1, 1, 5, 0, 1) == 0.0);
  CHECK(nesterov_tv_bound(1, 1, 5, 3, 7) == 0.0);
  CHECK_THROWS_AS(nesterov_tv_bound(1, 2, 1, 0, 1), ValidationError);
  CHECK_THROWS_AS(nesterov_tv_bound(2, 1, 1, -1, 1), ValidationError);
}

TEST_CASE("static Nesterov bound equals the potential decay") {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const double mu = 0.01 + rng.uniform();
    const double L = mu * (1.5 + 1e3 * rng.uniform());
    const double R = 10.0 * rng.uniform();
    const int N = static_cast<int>(rng.below(500));
    const double gamma = 1.0 / (std::sqrt(L / mu) - 1.0);
    const double expect = (L + mu) / 2.0 * R * R / std::pow(1.0 + gamma, N);
    CHECK(std::abs(nesterov_tv_bound(L, mu, R, 0, N) - expect) <= 1e-12 * std::max(1.0, expect));
  }
}

TEST_CASE("alg1_complexity examples") {
  const Alg1Complexity c = alg1_complexity_from_log_term(100, 10, 0);
  CHECK(c.iterations == 100);
  CHECK(std::abs(c.alpha_ceiling - 1.0 / (10.0 * std::log(100.0))) <= 1e-12);
  CHECK(std::abs(c.alpha_ceiling - 0.021715) <= 1e-6);
  CHECK_FALSE(c.infeasible);
  CHECK(alg1_complexity_from_log_term(100, 10, 0.03).infeasible);
  const Alg1Complexity one = alg1_complexity(1, 1, 1, 1, 0.1, 0.5);
  CHECK(one.ceiling_unbounded);
  CHECK(std::isinf(one.alpha_ceiling));
  CHECK_FALSE(one.infeasible);
  const Alg1Complexity full = alg1_complexity(4, 4, 1, 2, 0.5, 0.1);
  CHECK(full.log_term == doctest::Approx(std::log(5.0 * 4.0 / 1.0)).epsilon(1e-14));
  CHECK(full.iterations == static_cast<long>(std::ceil((2.0 + 0.1 * std::log(4.0)) * std::log(20.0))));
  CHECK_THROWS_AS(alg1_complexity(0.5, 1, 1, 1, 0.1, 0), ValidationError);
  CHECK_THROWS_AS(alg1_complexity(4, 4, 1, 1, 0.0, 0), ValidationError);
}

TEST_CASE("primal_from_dual_bound examples") {
  CHECK(primal_from_dual_bound(0, 3, 2, 1, 5) == 0.0);
  CHECK(primal_from_dual_bound(1, 1, 2, 2, 0) == doctest::Approx(2).epsilon(1e-15));
  CHECK(primal_from_dual_bound(2, 1, 1, 2, 1) == doctest::Approx(4 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(primal_from_dual_bound(1, 1, 1, 0, 1), ValidationError);
}

TEST_CASE("delta_bound_check examples") {
  auto half = [](const AgentMatrix& x) { return 0.5 * x.squaredNorm(); };
  auto full = [](const AgentMatrix& x) { return x.squaredNorm(); };
  std::vector<AgentMatrix> pts;
  for (double v : {-2.0, -0.5, 0.0, 1.0, 3.0}) pts.push_back(AgentMatrix::Constant(1, 1, v));
  DeltaCheck c = delta_bound_check(half, full, 0.0, 2, 1, pts);
  CHECK(c.ok);
  CHECK(std::abs(c.worst_slack) <= 1e-15);
  c = delta_bound_check(half, half, 0.0, 2, 1, pts);
  CHECK(c.ok);
  CHECK(c.worst_slack == 0.0);
  c = delta_bound_check(half, [](const AgentMatrix& x) { return 4.0 * x.squaredNorm(); }, 0.0, 2, 1, pts);
  CHECK_FALSE(c.ok);
  CHECK(c.worst_index == 4);
}

TEST_CASE("diging_rates examples") {
  CHECK(std::abs(diging_rates(4, 9, 1, 0, 0).lambda0 - (1.0 - 1.0 / 288.0)) <= 1e-12);
  CHECK(std::abs(diging_rates(1, 1, 1, 0, 0).lambda0 - 11.0 / 12.0) <= 1e-12);
  CHECK(diging_j(4, 9, 1) == doctest::Approx(3 * 2 * (1 + 4 * 3 * 2)).epsilon(1e-15));
  CHECK(diging_default_stepsize(4, 9, 0.5, 1) == doctest::Approx(1.5 / (0.5 * 151)).epsilon(1e-15));
  for (double kb : {1.0, 2.0, 10.0}) {
    CHECK(diging_rates(kb * 1.5, 4, 1, 0, 0).lambda0 > diging_rates(kb, 4, 1, 0, 0).lambda0);
    CHECK(diging_rates(kb, 5, 1, 0, 0).lambda0 > diging_rates(kb, 4, 1, 0, 0).lambda0);
  }
}

TEST_CASE("diging_rates branches") {
  const DigingRates base = diging_rates(2, 4, 2, 0.3, 0.5);
  REQUIRE(base.alpha0 > 0.0);
  CHECK(base.alpha0 <= base.alpha_max);
  const DigingRates low = diging_rates(2, 4, 2, 0.3, 0.5, 0.5 * base.alpha0);
  CHECK(low.branch == 1);
  CHECK(*low.lambda == doctest::Approx(std::pow(1 - 0.5 * base.alpha0 * 0.5 / 1.5, 0.25)));
  const DigingRates high = diging_rates(2, 4, 2, 0.3, 0.5, 0.5 * (base.alpha0 + base.alpha_max));
  CHECK(high.branch == 2);
  CHECK(*diging_rates(2, 4, 2, 0.3, 0.5, base.alpha_max).lambda == doctest::Approx(1.0).epsilon(1e-12));
  for (const DigingRates& r : {low, high}) {
    CHECK(*r.lambda >= 0.0);
    CHECK(*r.lambda < 1.0);
  }
  // The two branches meet at alpha0.
  const double a0 = base.alpha0;
  const double left = std::pow(1 - a0 * 0.5 / 1.5, 1.0 / 4.0);
  const double right = std::pow(std::sqrt(a0 * 0.5 * base.J / 1.5) + 0.3, 1.0 / 2.0);
  CHECK(left == doctest::Approx(right).epsilon(1e-9));
  CHECK_THROWS_AS(diging_rates(2, 4, 2, 0.3, 0.5, 2 * base.alpha_max), ValidationError);
  CHECK_THROWS_AS(diging_rates(2, 4, 2, 0.3, 0.5, 0.0), ValidationError);
  CHECK_THROWS_AS(diging_rates(0.5, 4, 1, 0, 0), ValidationError);
  CHECK_THROWS_AS(diging_rates(2, 4, 1, 1.0, 0), ValidationError);
}

TEST_CASE("panda_rates examples") {
  CHECK(std::abs(panda_rates(4, 0, 0, 0, 1).lambda0 - (1.0 - 9.0 / 512.0)) <= 1e-12);
  CHECK(std::abs(panda_rates(1, 0, 0, 0, 1).lambda0 - 55.0 / 64.0) <= 1e-12);
  const PandaRates p = panda_rates(4, 4, 1, 0.2, 2);
  REQUIRE(p.alpha_step > 0.0);
  double prev = 1.0;
  for (int k = 1; k <= 10; ++k) {
    const double c = std::min(p.alpha_step, p.alpha_step * k / 10.0);
    const double lam = *panda_rates(4, 4, 1, 0.2, 2, c).lambda;
    CHECK(lam < prev);
    CHECK(lam >= 0.0);
    prev = lam;
  }
  CHECK_THROWS_AS(panda_rates(4, 4, 1, 0.2, 2, 2 * p.alpha_step), ValidationError);
}

TEST_CASE("static_nesterov_comparison examples") {
  StaticComparison c = static_nesterov_comparison(0, 3, 7);
  CHECK(c.lhs == 0.0);
  CHECK(c.favors_alg1);
  c = static_nesterov_comparison(0.5, 1, 1);
  CHECK(c.lhs == doctest::Approx(0.0005).epsilon(1e-12));
  CHECK(c.rhs == 1.0);
  CHECK(c.favors_alg1);
  const StaticComparison big = static_nesterov_comparison(0.5, 1e6, 1e12);
  CHECK(big.rhs > static_nesterov_comparison(0.5, 1e3, 1e12).rhs);
  CHECK_THROWS_AS(static_nesterov_comparison(1.5, 1, 1), ValidationError);
}

TEST_CASE("alg1_rate") {
  CHECK(alg1_rate(1, 1, 1) == 0.0);
  CHECK(alg1_rate(4, 16, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(alg1_rate(4, 1, 2), ValidationError);
}
