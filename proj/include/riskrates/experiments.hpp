#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "riskrates/dist.hpp"
#include "riskrates/hedge.hpp"
#include "riskrates/risk.hpp"

namespace riskrates {

/// Payoff as a function of the underlying value x.
struct PayoffTransform {
  enum class Kind {
    Identity,  ///< x
    Centered,  ///< x − E[x], the mean taken under the law the scenarios are built from
    Call,      ///< (x − strike)⁺ − price
    Put,       ///< (strike − x)⁺ − price
  };
  Kind kind = Kind::Identity;
  double strike = 0.0;
  double price = 0.0;

  double operator()(double x, double law_mean) const;
};

/// What is estimated: a risk measure (hedged infimum) or a utility (hedged
/// supremum).
using Objective = std::variant<RiskSpec, Utility>;

struct ExperimentConfig {
  Distribution dist = Bernoulli{0.5};
  Objective objective = RiskSpec{AvarSpec{0.0}};
  PayoffTransform position{};
  std::vector<PayoffTransform> options;
  StrategySet strategies = Singleton{};
  std::vector<std::size_t> n_grid;
  std::size_t replications = 100;
  std::uint64_t seed = 0x5EED;
  std::vector<double> epsilons;
  double tol = 1e-9;
  unsigned threads = 1;  // hint only; results do not depend on it
};

/// Throws ParameterError on an invalid config (n_grid strictly increasing
/// and ≥ 2, R ≥ 10, positive epsilons, strategy dimension = option count).
void validate(const ExperimentConfig& config);

/// Scenario set of a finite law: one scenario per atom.
ScenarioSet build_scenarios(const FiniteDiscrete& law, const PayoffTransform& position,
                            const std::vector<PayoffTransform>& options);

/// π (or ρ when there is nothing to trade) on a finite law.
double plug_in_value(const ExperimentConfig& config, const FiniteDiscrete& law);

struct TrueValue {
  double value = 0.0;
  bool approximate = false;
};

inline constexpr std::size_t kReferenceSampleSize = 1'000'000;

/// Exact on finite laws, closed form for Pareto tails with an AVaR or
/// spectral risk and nothing to trade, otherwise the plug-in value on a
/// reference sample of kReferenceSampleSize draws (flagged approximate).
TrueValue true_value(const ExperimentConfig& config);

/// Seed of replication r at sample size N.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t r);

/// Signed errors (plug-in − true) for every (N, replication) cell. Curves and
/// deviation tables are derived from one simulation so they always agree.
struct Simulation {
  TrueValue truth;
  std::vector<std::size_t> n_grid;
  std::vector<std::vector<double>> signed_errors;  // [grid index][replication]
};

/// Called after each grid point with the simulation so far (n_grid and
/// signed_errors hold the completed cells only).
using CellCallback = std::function<void(const Simulation&)>;

Simulation simulate(const ExperimentConfig& config, const CellCallback& on_cell = {});

struct RatePoint {
  std::size_t n = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
};

struct RateCurve {
  std::vector<RatePoint> points;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct DeviationPoint {
  std::size_t n = 0;
  double epsilon = 0.0;
  double p_hat = 0.0;
  std::size_t replications = 0;
};

struct DeviationCurve {
  std::vector<DeviationPoint> points;
};

struct BiasReport {
  std::size_t n = 0;
  double mean_signed_error = 0.0;
  double std_error = 0.0;
};

/// Mean of |error| with standard error sample-std/√R.
RateCurve rate_curve(const Simulation& sim);
/// Fraction of replications with |error| ≥ ε.
DeviationCurve deviation_curve(const Simulation& sim, const std::vector<double>& epsilons);

RateCurve mean_error_curve(const ExperimentConfig& config);
DeviationCurve deviation_curve(const ExperimentConfig& config);
BiasReport bias_report(const ExperimentConfig& config, std::size_t n);
/// Mean signed error per grid point; requires no minimum R.
std::vector<BiasReport> bias_reports(const Simulation& sim);

/// Ordinary least squares y = slope·x + intercept.
RateFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// OLS of log(mean_error) on log(N). Throws DegenerateError on a zero error
/// and ParameterError with fewer than two points.
RateFit fit_rate(const RateCurve& curve);

/// Mean error of the sharpness risk under the drifting law Ber(1/N), using
/// the two-point closed form for both the truth and the plug-in Ber(p̂_N).
RateCurve sharpness_curve(double eps, const std::vector<std::size_t>& n_grid,
                          std::size_t replications, std::uint64_t seed, unsigned threads = 1);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions
/// are rethrown for the smallest failing index.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace riskrates
