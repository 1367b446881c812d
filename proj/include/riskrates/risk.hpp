#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riskrates/dist.hpp"
#include "riskrates/loss.hpp"

namespace riskrates {

struct AvarSpec {
  double u = 0.0;
};

struct OceSpec {
  LossFunction loss;
};

struct ShortfallSpec {
  LossFunction loss;
};

/// One term of a finite Kusuoka family: a discrete mixing measure over AVaR
/// levels and its penalty.
struct SpectralComponent {
  std::vector<std::pair<double, double>> levels;  // (u_k, mass_k)
  double penalty = 0.0;
};

struct SpectralFamily {
  std::vector<SpectralComponent> components;
};

struct SharpnessSpec {
  double eps = 0.5;
};

using RiskSpec = std::variant<AvarSpec, OceSpec, ShortfallSpec, SpectralFamily, SharpnessSpec>;

/// Throws DomainError / ParameterError when a parameter is out of range.
void validate(const RiskSpec& spec);
std::string describe(const RiskSpec& spec);

/// OCE value with the minimizer and bracket statistics.
struct OceResult {
  double value = 0.0;
  double minimizer_m = 0.0;
  double lo = 0.0;  // initial bracket
  double hi = 0.0;
  std::size_t iterations = 0;
};

/// Integral of the upper quantile function over the top `mass` of the law,
/// i.e. (1−u)·AVaR_u with 1−u = mass. Splits the boundary atom fractionally.
double upper_tail_integral(const FiniteDiscrete& law, double mass);

/// Tail average of the top 1−u probability mass. Throws DomainError unless
/// 0 ≤ u < 1.
double avar(const FiniteDiscrete& law, double u);

/// inf_m E[l(X − m)] + m.
///
/// Bisection on the one-sided derivatives of the convex objective inside
/// [−B, B] with B = 1 + max|x|, which contains a minimizer for every loss with
/// 1 ∈ ∂l(0). Stops when the bracket-certified value gap (one-sided slope
/// times width) drops below tol, when the bracket cannot shrink further in
/// double precision, or after 200 iterations (NumericError). For minimizer
/// intervals the left end is reported.
OceResult oce(const FiniteDiscrete& law, const LossFunction& loss, double tol);

/// Unique m with E[l(X − m)] = 1, to accuracy tol in m. Requires a strictly
/// increasing loss (ContractError otherwise); InfeasibleError if bracket
/// expansion cannot straddle the level 1.
double shortfall(const FiniteDiscrete& law, const LossFunction& loss, double tol);

/// max over components of Σ_k mass_k·AVaR_{u_k} − penalty.
double spectral_risk(const FiniteDiscrete& law, const SpectralFamily& family);

/// sup_{x≥1} (1−x^(−ε))·E[X] + x^(−ε)·AVaR_{1−1/x}(X), evaluated exactly.
///
/// In the tail-mass variable s = 1/x the objective on a piece of the
/// quantile function with value a and tail integral T(s) = a·s + c reads
/// E[X] + (a − E[X])·s^ε + c·s^(ε−1). Its maximum is attained at a piece
/// endpoint or at the stationary point s* = (1−ε)·c / (ε·(a − E[X])).
double sharpness_risk(const FiniteDiscrete& law, double eps);

/// Dispatches on the spec. `tol` is used by the OCE and SF solvers only.
double evaluate(const FiniteDiscrete& law, const RiskSpec& spec, double tol = 1e-10);

}  // namespace riskrates
