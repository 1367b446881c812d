#pragma once

#include <cstddef>
#include <functional>
#include <utility>

// Closed-form and brute-force reference values. Tests and the experiment
// harness use these as ground truth; they never call into the solvers.
namespace riskrates::oracle {

/// AVaR_u of Ber(p): min(p/(1−u), 1).
double avar_bernoulli(double p, double u);

/// AVaR_u of the Pareto tail law with index q: q/(q−1)·(1−u)^(−1/q).
double avar_pareto(double q, double u);

/// sup_{x≥1} (1−x^(−ε))·a + x^(−ε)·min(a·x, 1) = (1−a^ε)·a + a^ε.
double sharpness_two_point(double a, double eps);

/// Σ_{n=1}^{n_max} 2^(−a·n)·min(x·2ⁿ, 2^(b·n)) for 0 ≤ b < a < 1.
double dyadic_sum(double a, double b, double x, std::size_t n_max = 400);

/// Smallest n_max with 2^((b−a)·n) < 1e−12.
std::size_t dyadic_truncation(double a, double b);

/// Minimum of f over `points` equally spaced nodes of [lo, hi]; the leftmost
/// node wins ties. Returns (argmin, min).
std::pair<double, double> grid_min(const std::function<double(double)>& f, double lo,
                                   double hi, std::size_t points);

/// Maximum of f over `points` geometrically spaced nodes of [lo, hi], lo > 0.
std::pair<double, double> geometric_grid_max(const std::function<double(double)>& f,
                                             double lo, double hi, std::size_t points);

/// P[|K/n − p| ≥ eps] for K ~ Bin(n, p), by direct summation of the pmf.
double binomial_two_sided_tail(std::size_t n, double p, double eps);

/// E[h(K)] for K ~ Bin(n, p), by direct summation of the pmf.
double binomial_expectation(std::size_t n, double p, const std::function<double(std::size_t)>& h);

}  // namespace riskrates::oracle
