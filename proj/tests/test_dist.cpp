#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "riskrates/dist.hpp"
#include "riskrates/errors.hpp"

using namespace riskrates;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("riskrates_test_" + name);
  std::ofstream(path) << body;
  return path;
}

double sample_mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("sample: degenerate Bernoulli") {
  const auto s = sample(Bernoulli{1.0}, 5, 123);
  CHECK(s.values == std::vector<double>{1, 1, 1, 1, 1});
  CHECK(s.source_seed == 123);
}

TEST_CASE("sample: Bernoulli(0.5) law of large numbers") {
  const auto s = sample(Bernoulli{0.5}, 100000, 7);
  // 5 standard errors of a mean of 1e5 fair coins is 0.0079 < 0.01.
  CHECK(std::abs(sample_mean(s.values) - 0.5) < 0.01);
}

TEST_CASE("sample: Pareto tail support, mean and tail law") {
  const auto s = sample(ParetoTail{2.0}, 1000000, 11);
  const double n = static_cast<double>(s.values.size());
  for (double v : s.values) REQUIRE(v >= 1.0);
  const double m = sample_mean(s.values);
  double ss = 0.0;
  for (double v : s.values) ss += (v - m) * (v - m);
  const double se = std::sqrt(ss / (n - 1)) / std::sqrt(n);
  CHECK(std::abs(m - 2.0) < 3.0 * se);

  for (double t : {1.0, 2.0, 4.0}) {
    const double expected = std::pow(t, -2.0);
    const double frac =
        static_cast<double>(std::count_if(s.values.begin(), s.values.end(),
                                          [t](double v) { return v >= t; })) / n;
    const double tail_se = std::sqrt(expected * (1 - expected) / n);
    CHECK(std::abs(frac - expected) <= 5.0 * tail_se + 1e-15);
  }
}

TEST_CASE("sample: determinism and parameter errors") {
  const Distribution d = FiniteDiscrete({-1.0, 0.5, 3.0}, {0.2, 0.3, 0.5});
  CHECK(sample(d, 1000, 42).values == sample(d, 1000, 42).values);
  CHECK(sample(d, 1000, 42).values != sample(d, 1000, 43).values);
  CHECK_THROWS_AS(sample(Bernoulli{1.5}, 3, 1), ParameterError);
  CHECK_THROWS_AS(sample(ParetoTail{1.0}, 3, 1), ParameterError);
  CHECK_THROWS_AS(sample(Bernoulli{0.5}, 0, 1), ParameterError);
}

TEST_CASE("empirical: counting and canonical atoms") {
  auto a = empirical({{0, 0, 1, 1}});
  CHECK(a.atoms() == std::vector<double>{0, 1});
  CHECK(a.weights() == std::vector<double>{0.5, 0.5});

  auto b = empirical({{3}});
  CHECK(b.atoms() == std::vector<double>{3});
  CHECK(b.weights() == std::vector<double>{1});

  auto c = empirical({{1, 1, 1, 2}});
  CHECK(c.atoms() == std::vector<double>{1, 2});
  CHECK(c.weights() == std::vector<double>{0.75, 0.25});

  CHECK_THROWS_AS(empirical(SampleVector{}), EmptyInputError);
}

TEST_CASE("empirical: mean equals sample mean") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = sample(FiniteDiscrete({-2.0, 0.1, 7.5}, {0.3, 0.3, 0.4}), 5000, seed);
    CHECK(std::abs(empirical(s).mean() - sample_mean(s.values)) < 1e-12);
  }
}

TEST_CASE("FiniteDiscrete: validation") {
  CHECK_THROWS_AS(FiniteDiscrete({1.0, 2.0}, {0.5}), ParameterError);
  CHECK_THROWS_AS(FiniteDiscrete({1.0, 2.0}, {0.5, 0.6}), ParameterError);
  CHECK_THROWS_AS(FiniteDiscrete({1.0, 2.0}, {-0.5, 1.5}), ParameterError);
  CHECK_THROWS_AS(FiniteDiscrete({1.0, NAN}, {0.5, 0.5}), ParameterError);
  CHECK_NOTHROW(FiniteDiscrete({1.0, 2.0}, {0.5, 0.5 + 1e-13}));
}

TEST_CASE("FiniteDiscrete: permutation invariance is exact") {
  FiniteDiscrete a({3.0, 1.0, 3.0, 2.0}, {0.1, 0.2, 0.3, 0.4});
  FiniteDiscrete b({2.0, 3.0, 1.0, 3.0}, {0.4, 0.3, 0.2, 0.1});
  CHECK(a == b);
  CHECK(a.atoms() == std::vector<double>{1, 2, 3});
}

TEST_CASE("quantile: examples and domain") {
  CHECK(quantile(Bernoulli{0.25}, 0.9) == 1.0);
  CHECK(quantile(Bernoulli{0.25}, 0.5) == 0.0);
  CHECK(quantile(ParetoTail{2.0}, 0.75) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(quantile(FiniteDiscrete({1, 2, 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.5) == 2.0);
  CHECK(quantile(FiniteDiscrete({1, 2, 3}, {0.0, 0.5, 0.5}), 0.0) == 2.0);
  CHECK_THROWS_AS(quantile(Bernoulli{0.5}, 1.0), DomainError);
  CHECK_THROWS_AS(quantile(Bernoulli{0.5}, -0.1), DomainError);
}

TEST_CASE("quantile: monotone in u for every variant") {
  const std::vector<Distribution> dists = {
      Bernoulli{0.3}, ParetoTail{1.5}, FiniteDiscrete({-1, 0, 4}, {0.25, 0.5, 0.25}),
      empirical(sample(ParetoTail{3.0}, 257, 5))};
  for (const auto& d : dists) {
    double prev = quantile(d, 0.0);
    for (int i = 1; i < 1000; ++i) {
      const double q = quantile(d, i / 1000.0);
      CHECK(q >= prev);
      prev = q;
    }
  }
}

TEST_CASE("load_samples: columns, parse and schema errors") {
  auto one = write_temp("a.csv", "a\n1\n2\n");
  CHECK(load_samples(one, std::string("a")).values == std::vector<double>{1, 2});

  auto two = write_temp("ab.csv", "a,b\n1.5,10\n-2,20\n");
  CHECK(load_samples(two, std::size_t{0}).values == std::vector<double>{1.5, -2});
  CHECK(load_samples(two, std::string("b")).values == std::vector<double>{10, 20});

  auto bad = write_temp("bad.csv", "a\n1\nx\n3\n");
  try {
    load_samples(bad, std::string("a"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  auto empty_cell = write_temp("empty.csv", "a,b\n1,2\n,3\n");
  CHECK_THROWS_AS(load_samples(empty_cell, std::string("a")), ParseError);
  CHECK_THROWS_AS(load_samples(two, std::string("zzz")), SchemaError);
  CHECK_THROWS_AS(load_samples(two, std::size_t{5}), SchemaError);
  CHECK_THROWS_AS(load_samples("/nonexistent/file.csv", std::string("a")), IoError);
}
