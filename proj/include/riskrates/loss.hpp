#pragma once

#include <limits>
#include <string>

namespace riskrates {

/// Convex nondecreasing loss l ≥ 0 with 1 ∈ ∂l(0).
///
/// The set of losses is closed: the four families below cover every use in
/// the library and each has an exact derivative. Tabulated or user-supplied
/// losses are not supported.
class LossFunction {
 public:
  enum class Kind {
    AvarLoss,     ///< x⁺ / (1 − u)
    Exponential,  ///< eˣ
    Power,        ///< x⁺ + (x⁺)ᵖ / p
    LinearAbove,  ///< slope · x⁺, slope ≥ 1
  };

  static LossFunction avar_loss(double u);
  static LossFunction exponential();
  static LossFunction power(double p);
  static LossFunction linear_above(double slope);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  std::string name() const;

  double operator()(double x) const;
  double right_derivative(double x) const;
  double left_derivative(double x) const;

  /// Polynomial growth degree of l; +∞ for the exponential loss, which is
  /// only admissible on bounded inputs.
  double growth_degree() const noexcept;
  bool bounded_use_only() const noexcept { return growth_degree() == kInfiniteGrowth; }

  /// liminf l(x)/x > 1, required for OCE on unbounded support.
  bool superlinear() const noexcept;
  bool strictly_increasing() const noexcept { return kind_ == Kind::Exponential; }

  static constexpr double kInfiniteGrowth = std::numeric_limits<double>::infinity();

  friend bool operator==(const LossFunction&, const LossFunction&) = default;

 private:
  LossFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

/// Numerical spot check of the loss axioms on a 1000-point grid over
/// [−span, span]: nonnegativity, monotonicity, midpoint convexity within
/// 1e−9 (relative), and l'(0−) ≤ 1 ≤ l'(0+).
bool check_loss_axioms(const LossFunction& loss, double span = 10.0);

}  // namespace riskrates
