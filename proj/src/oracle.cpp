#include "riskrates/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "riskrates/errors.hpp"

namespace riskrates::oracle {

double avar_bernoulli(double p, double u) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("u must lie in [0, 1)");
  return std::min(p / (1.0 - u), 1.0);
}

double avar_pareto(double q, double u) {
  if (!(q > 1.0)) throw DomainError("Pareto index q must be > 1");
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("u must lie in [0, 1)");
  return q / (q - 1.0) * std::pow(1.0 - u, -1.0 / q);
}

double sharpness_two_point(double a, double eps) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("a must lie in [0, 1]");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double ae = std::pow(a, eps);
  return (1.0 - ae) * a + ae;
}

std::size_t dyadic_truncation(double a, double b) {
  if (!(0.0 <= b && b < a && a < 1.0)) throw DomainError("need 0 <= b < a < 1");
  return static_cast<std::size_t>(std::ceil(12.0 * std::log2(10.0) / (a - b))) + 1;
}

double dyadic_sum(double a, double b, double x, std::size_t n_max) {
  if (!(0.0 <= b && b < a && a < 1.0)) throw DomainError("need 0 <= b < a < 1");
  if (!(x >= 0.0)) throw DomainError("x must be nonnegative");
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    sum += std::exp2(-a * dn) * std::min(x * std::exp2(dn), std::exp2(b * dn));
  }
  return sum;
}

std::pair<double, double> grid_min(const std::function<double(double)>& f, double lo,
                                   double hi, std::size_t points) {
  if (!(lo < hi) || points < 2) throw DomainError("grid_min needs lo < hi and >= 2 points");
  double best_x = lo;
  double best = f(lo);
  for (std::size_t i = 1; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) /
                                                     static_cast<double>(points - 1);
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

std::pair<double, double> geometric_grid_max(const std::function<double(double)>& f,
                                             double lo, double hi, std::size_t points) {
  if (!(0.0 < lo && lo < hi) || points < 2) throw DomainError("bad geometric grid");
  const double ratio = std::log(hi / lo);
  double best_x = lo;
  double best = f(lo);
  for (std::size_t i = 1; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo * std::exp(ratio * static_cast<double>(i) /
                                                          static_cast<double>(points - 1));
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

double binomial_expectation(std::size_t n, double p, const std::function<double(std::size_t)>& h) {
  // pmf in log space so large n stays finite.
  double total = 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  for (std::size_t k = 0; k <= n; ++k) {
    double logpmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    if (k > 0) logpmf += static_cast<double>(k) * lp;
    if (k < n) logpmf += static_cast<double>(n - k) * lq;
    if (p == 0.0) logpmf = k == 0 ? 0.0 : -INFINITY;
    if (p == 1.0) logpmf = k == n ? 0.0 : -INFINITY;
    total += std::exp(logpmf) * h(k);
  }
  return total;
}

double binomial_two_sided_tail(std::size_t n, double p, double eps) {
  return binomial_expectation(n, p, [&](std::size_t k) {
    // Closed threshold; the slack absorbs rounding of k/n − p at the boundary.
    return std::abs(static_cast<double>(k) / static_cast<double>(n) - p) >= eps * (1.0 - 1e-12)
               ? 1.0
               : 0.0;
  });
}

}  // namespace riskrates::oracle
