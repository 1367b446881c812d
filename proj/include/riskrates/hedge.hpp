#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "riskrates/dist.hpp"
#include "riskrates/errors.hpp"
#include "riskrates/risk.hpp"

namespace riskrates {

/// Finite weighted scenarios with a position payoff f and e net option
/// payoffs per scenario (option price already subtracted).
class ScenarioSet {
 public:
  ScenarioSet() = default;

  /// `g` is row-major N×e. Throws ParameterError on invalid weights,
  /// non-finite entries or a shape mismatch.
  ScenarioSet(std::vector<double> weights, std::vector<double> f, std::vector<double> g,
              std::size_t options);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t options() const noexcept { return options_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& f() const noexcept { return f_; }
  const std::vector<double>& g() const noexcept { return g_; }
  double g(std::size_t scenario, std::size_t option) const {
    return g_[scenario * options_ + option];
  }

  /// F + Σ_j strategy_j·G_j per scenario.
  std::vector<double> outcome(std::span<const double> strategy) const;
  /// Law of F + strategy·G under the scenario weights.
  FiniteDiscrete outcome_law(std::span<const double> strategy) const;

  ScenarioSet shifted(double c) const;

 private:
  std::vector<double> weights_;
  std::vector<double> f_;
  std::vector<double> g_;
  std::size_t options_ = 0;
};

struct Singleton {
  std::vector<double> g;
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// {g ∈ [0,1]^e : Σ g_i = 1}.
struct Simplex {
  std::size_t e = 1;
};

using StrategySet = std::variant<Singleton, Box, Simplex>;

std::size_t dimension(const StrategySet& set);
/// Throws ParameterError for empty or unbounded sets.
void validate(const StrategySet& set);
double diameter(const StrategySet& set);
/// Max constraint violation of g with respect to the set.
double violation(const StrategySet& set, std::span<const double> g);

struct HedgeResult {
  double value = 0.0;
  std::vector<double> g_star;
  std::size_t restarts_used = 0;
  std::size_t inner_iterations = 0;
  bool certified = true;
};

/// Raised when the descent reaches its cycle cap. Carries the best point.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, HedgeResult best)
      : NumericError(what), best_(std::move(best)) {}
  const HedgeResult& best() const noexcept { return best_; }

 private:
  HedgeResult best_;
};

struct HedgeOptions {
  std::size_t restarts = 3;            // descents started from the best lattice points
  std::size_t lattice_per_axis = 7;    // box lattice resolution
  std::size_t simplex_resolution = 6;  // barycentric lattice step 1/resolution
  std::size_t max_cycles = 2000;
};

/// Derivative-free minimization of a convex function over a compact
/// strategy set.
///
/// A coarse lattice picks up to `restarts` starting points (ties broken by
/// lattice order). From each, line searches by golden section run over a
/// shrinking trust region: axis directions and pairwise diagonals for a box,
/// pairwise exchanges e_i − e_j for the simplex. A descent ends when the
/// trust-region radius falls below tol·(1 + diameter).
HedgeResult minimize_convex(const std::function<double(std::span<const double>)>& objective,
                            const StrategySet& set, double tol, const HedgeOptions& options = {});

/// inf over the strategy set of ρ(F + g·G).
///
/// Shortfall risk is handled through the root of J(m) = inf_g E[l(F + g·G − m)] = 1
/// with the inner problem solved at tol/10. With e = 0 or a singleton set the
/// risk is evaluated directly.
HedgeResult hedged_risk(const ScenarioSet& scenarios, const RiskSpec& risk,
                        const StrategySet& strategies, double tol,
                        const HedgeOptions& options = {});

/// Concave nondecreasing utility.
struct Utility {
  std::string name;
  std::function<double(double)> fn;

  static Utility identity();
  /// U(x) = −exp(−a·x).
  static Utility exponential(double a = 1.0);
};

/// Grid check on [−span, span]: nondecreasing and midpoint concave.
bool check_utility_shape(const Utility& u, double span = 10.0);

/// sup over the strategy set of Σ_i w_i·U(f_i + g·G_i).
HedgeResult utility_max(const ScenarioSet& scenarios, const Utility& utility,
                        const StrategySet& strategies, double tol,
                        const HedgeOptions& options = {});

struct ProbeReport {
  std::vector<std::pair<double, double>> values;  // (t, ρ(F + t·d·G))
  bool diverging = false;
};

/// Evaluates ρ along the ray t·direction on a geometric grid from 1 to
/// t_max. `diverging` is set when the value drops by more than 1 over each
/// of the last two decades [t_max/100, t_max/10] and [t_max/10, t_max].
ProbeReport unboundedness_probe(const ScenarioSet& scenarios, const RiskSpec& risk,
                                std::span<const double> direction, double t_max,
                                std::size_t steps, double tol = 1e-10);

}  // namespace riskrates
