#include <cmath>

#include "doctest.h"
#include "riskrates/errors.hpp"
#include "riskrates/oracle.hpp"
#include "riskrates/risk.hpp"

using namespace riskrates;

TEST_CASE("avar_bernoulli") {
  CHECK(oracle::avar_bernoulli(0.25, 0.5) == 0.5);
  CHECK(oracle::avar_bernoulli(0.37, 0.0) == 0.37);
  CHECK(oracle::avar_bernoulli(0.9, 0.5) == 1.0);
  CHECK_THROWS_AS(oracle::avar_bernoulli(1.1, 0.5), DomainError);
  CHECK_THROWS_AS(oracle::avar_bernoulli(0.5, 1.0), DomainError);
}

TEST_CASE("avar_pareto") {
  CHECK(oracle::avar_pareto(2.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(oracle::avar_pareto(2.0, 0.75) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(oracle::avar_pareto(3.0, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(oracle::avar_pareto(1.0, 0.0), DomainError);
}

TEST_CASE("sharpness_two_point") {
  CHECK(oracle::sharpness_two_point(0.0, 0.5) == 0.0);
  CHECK(oracle::sharpness_two_point(1.0, 0.3) == 1.0);
  CHECK(oracle::sharpness_two_point(0.25, 0.5) == doctest::Approx(0.625).epsilon(1e-15));
  // Geometric grid sup over x ∈ [1, 10^6] gave 0.384604006; closed form 0.384604989.
  const double v = oracle::sharpness_two_point(0.1, 0.5);
  CHECK(std::abs(v - 0.38460498941515414) < 1e-15);
  const auto grid = oracle::geometric_grid_max(
      [](double x) {
        return (1.0 - std::pow(x, -0.5)) * 0.1 + std::pow(x, -0.5) * std::min(0.1 * x, 1.0);
      },
      1.0, 1e6, 1000000);
  CHECK(std::abs(grid.second - v) < 1e-6);
}

TEST_CASE("dyadic_sum") {
  CHECK(oracle::dyadic_sum(0.5, 0.25, 0.0, 200) == 0.0);
  // Direct summation (Python, 200 terms): 5.285213507883241 and 0.3509399235686169.
  CHECK(oracle::dyadic_sum(0.5, 0.25, 1.0, 200) == doctest::Approx(5.285213507883241).epsilon(1e-13));
  const double small = oracle::dyadic_sum(0.5, 0.0, std::ldexp(1.0, -8), 200);
  CHECK(small == doctest::Approx(0.3509399235686169).epsilon(1e-13));
  CHECK(small <= 10.0 * std::sqrt(std::ldexp(1.0, -8)));
  CHECK(oracle::dyadic_sum(0.5, 0.25, 1.0) == doctest::Approx(oracle::dyadic_sum(0.5, 0.25, 1.0, 200)));
  CHECK(oracle::dyadic_truncation(0.5, 0.25) <= 400);
  CHECK_THROWS_AS(oracle::dyadic_sum(0.5, 0.5, 1.0), DomainError);
}

TEST_CASE("grid_min") {
  auto [x0, v0] = oracle::grid_min([](double x) { return x * x; }, -1.0, 1.0, 201);
  CHECK(std::abs(x0) < 1e-15);
  CHECK(v0 < 1e-30);
  auto [x1, v1] = oracle::grid_min([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1000001);
  CHECK(std::abs(x1 - 0.3) < 1e-6);
  (void)v1;
  auto [x2, v2] = oracle::grid_min([](double) { return 5.0; }, 0.0, 1.0, 11);
  CHECK(x2 == 0.0);
  CHECK(v2 == 5.0);
}

TEST_CASE("two-point AVaR agrees with the closed form on a 20x20 grid") {
  for (int i = 1; i <= 20; ++i) {
    const double p = i / 21.0;
    const FiniteDiscrete law({0.0, 1.0}, {1.0 - p, p});
    for (int j = 0; j < 20; ++j) {
      const double u = j / 20.0;
      CHECK(std::abs(avar(law, u) - oracle::avar_bernoulli(p, u)) <= 1e-12);
    }
  }
}

TEST_CASE("binomial helpers") {
  CHECK(oracle::binomial_expectation(10, 0.3, [](std::size_t) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(oracle::binomial_expectation(10, 0.3, [](std::size_t k) { return double(k); }) ==
        doctest::Approx(3.0).epsilon(1e-13));
  // scipy.stats.binom: P[|K − 50| ≥ 10] for K ~ Bin(100, 1/2).
  CHECK(oracle::binomial_two_sided_tail(100, 0.5, 0.1) == doctest::Approx(0.056887933640980735).epsilon(1e-10));
}
