#include "riskrates/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "riskrates/errors.hpp"
#include "riskrates/oracle.hpp"
#include "riskrates/rng.hpp"

namespace riskrates {
namespace {

constexpr std::uint64_t kReferenceStream = 0x52454600;  // "REF"

bool trades_nothing(const ExperimentConfig& config) {
  if (config.options.empty()) return true;
  if (const auto* single = std::get_if<Singleton>(&config.strategies))
    return std::all_of(single->g.begin(), single->g.end(), [](double v) { return v == 0.0; });
  return false;
}

std::optional<double> pareto_closed_form(const ExperimentConfig& config, double q) {
  const auto* risk = std::get_if<RiskSpec>(&config.objective);
  if (!risk || !trades_nothing(config) ||
      config.position.kind != PayoffTransform::Kind::Identity)
    return std::nullopt;
  if (const auto* a = std::get_if<AvarSpec>(risk)) return oracle::avar_pareto(q, a->u);
  if (const auto* f = std::get_if<SpectralFamily>(risk)) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : f->components) {
      double mix = 0.0;
      for (const auto& [u, w] : c.levels) mix += w * oracle::avar_pareto(q, u);
      best = std::max(best, mix - c.penalty);
    }
    return best;
  }
  return std::nullopt;
}

void require_unbounded_admissible(const ExperimentConfig& config) {
  const auto* risk = std::get_if<RiskSpec>(&config.objective);
  if (!risk) return;
  const LossFunction* loss = nullptr;
  if (const auto* o = std::get_if<OceSpec>(risk)) loss = &o->loss;
  if (!loss) return;
  if (loss->bounded_use_only() || !loss->superlinear())
    throw ContractError("OCE loss " + loss->name() +
                        " is not admissible on unbounded support (needs polynomial growth "
                        "and liminf l(x)/x > 1)");
}

/// |error| ≥ ε up to 1e−12 relative rounding: a plug-in that lands exactly
/// on the threshold in exact arithmetic still counts.
bool exceeds(double error, double eps) { return std::abs(error) >= eps * (1.0 - 1e-12); }

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_error_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

double PayoffTransform::operator()(double x, double law_mean) const {
  switch (kind) {
    case Kind::Identity:
      return x;
    case Kind::Centered:
      return x - law_mean;
    case Kind::Call:
      return std::max(x - strike, 0.0) - price;
    case Kind::Put:
      return std::max(strike - x, 0.0) - price;
  }
  return x;
}

void validate(const ExperimentConfig& config) {
  validate(config.dist);
  if (const auto* risk = std::get_if<RiskSpec>(&config.objective)) validate(*risk);
  validate(config.strategies);
  if (dimension(config.strategies) != config.options.size())
    throw ParameterError("strategy set dimension does not match the number of options");
  if (config.n_grid.empty()) throw ParameterError("n_grid is empty");
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] < 2) throw ParameterError("n_grid entries must be >= 2");
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1])
      throw ParameterError("n_grid must be strictly increasing");
  }
  if (config.replications < 10) throw ParameterError("replications must be >= 10");
  for (double e : config.epsilons)
    if (!(e > 0.0)) throw ParameterError("epsilons must be positive");
  if (!(config.tol > 0.0)) throw ParameterError("tol must be positive");
}

ScenarioSet build_scenarios(const FiniteDiscrete& law, const PayoffTransform& position,
                            const std::vector<PayoffTransform>& options) {
  const double m = law.mean();
  const std::size_t n = law.size();
  const std::size_t e = options.size();
  std::vector<double> f(n);
  std::vector<double> g(n * e);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = law.atoms()[i];
    f[i] = position(x, m);
    for (std::size_t j = 0; j < e; ++j) g[i * e + j] = options[j](x, m);
  }
  return ScenarioSet(law.weights(), std::move(f), std::move(g), e);
}

double plug_in_value(const ExperimentConfig& config, const FiniteDiscrete& law) {
  const ScenarioSet scenarios = build_scenarios(law, config.position, config.options);
  const StrategySet set = config.options.empty() ? StrategySet{Singleton{}} : config.strategies;
  if (const auto* risk = std::get_if<RiskSpec>(&config.objective))
    return hedged_risk(scenarios, *risk, set, config.tol).value;
  return utility_max(scenarios, std::get<Utility>(config.objective), set, config.tol).value;
}

TrueValue true_value(const ExperimentConfig& config) {
  validate(config.dist);
  if (is_finite_support(config.dist)) return {plug_in_value(config, as_discrete(config.dist)), false};
  const double q = std::get<ParetoTail>(config.dist).q;
  if (auto closed = pareto_closed_form(config, q)) return {*closed, false};
  require_unbounded_admissible(config);
  const SampleVector ref =
      sample(config.dist, kReferenceSampleSize, derive_seed(config.seed, {kReferenceStream}));
  return {plug_in_value(config, empirical(ref)), true};
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t r) {
  return derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)});
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::mutex mu;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (i < failed_index) {
              failed_index = i;
              failure = std::current_exception();
            }
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Simulation simulate(const ExperimentConfig& config, const CellCallback& on_cell) {
  validate(config);
  Simulation sim;
  sim.truth = true_value(config);
  const std::size_t R = config.replications;
  for (std::size_t n : config.n_grid) {
    std::vector<double> errors(R);
    parallel_for(R, config.threads, [&](std::size_t r) {
      try {
        const SampleVector s = sample(config.dist, n, replication_seed(config.seed, n, r));
        errors[r] = plug_in_value(config, empirical(s)) - sim.truth.value;
      } catch (const NumericError& e) {
        throw NumericError("N=" + std::to_string(n) + ", replication " + std::to_string(r) +
                           ": " + e.what());
      }
    });
    sim.n_grid.push_back(n);
    sim.signed_errors.push_back(std::move(errors));
    if (on_cell) on_cell(sim);
  }
  return sim;
}

RateCurve rate_curve(const Simulation& sim) {
  RateCurve curve;
  for (std::size_t k = 0; k < sim.n_grid.size(); ++k) {
    std::vector<double> abs_err(sim.signed_errors[k].size());
    std::transform(sim.signed_errors[k].begin(), sim.signed_errors[k].end(), abs_err.begin(),
                   [](double e) { return std::abs(e); });
    const double m = mean_of(abs_err);
    curve.points.push_back({sim.n_grid[k], m, std_error_of(abs_err, m)});
  }
  return curve;
}

DeviationCurve deviation_curve(const Simulation& sim, const std::vector<double>& epsilons) {
  if (epsilons.empty()) throw ParameterError("deviation curve needs at least one epsilon");
  DeviationCurve curve;
  for (std::size_t k = 0; k < sim.n_grid.size(); ++k) {
    const auto& errs = sim.signed_errors[k];
    for (double eps : epsilons) {
      const auto hits = std::count_if(errs.begin(), errs.end(),
                                      [eps](double e) { return exceeds(e, eps); });
      curve.points.push_back({sim.n_grid[k], eps,
                              static_cast<double>(hits) / static_cast<double>(errs.size()),
                              errs.size()});
    }
  }
  return curve;
}

RateCurve mean_error_curve(const ExperimentConfig& config) { return rate_curve(simulate(config)); }

DeviationCurve deviation_curve(const ExperimentConfig& config) {
  return deviation_curve(simulate(config), config.epsilons);
}

BiasReport bias_report(const ExperimentConfig& config, std::size_t n) {
  if (config.replications < 100) throw ParameterError("bias report needs >= 100 replications");
  ExperimentConfig single = config;
  single.n_grid = {n};
  return bias_reports(simulate(single)).front();
}

std::vector<BiasReport> bias_reports(const Simulation& sim) {
  std::vector<BiasReport> out;
  for (std::size_t k = 0; k < sim.n_grid.size(); ++k) {
    const auto& errs = sim.signed_errors[k];
    const double m = mean_of(errs);
    out.push_back({sim.n_grid[k], m, std_error_of(errs, m)});
  }
  return out;
}

RateFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParameterError("least squares needs >= 2 paired points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateError("least squares with constant abscissa");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

RateFit fit_rate(const RateCurve& curve) {
  if (curve.points.size() < 3) throw ParameterError("rate fit needs at least 3 points");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : curve.points) {
    if (!(p.mean_error > 0.0))
      throw DegenerateError("rate fit: zero mean error at N=" + std::to_string(p.n));
    x.push_back(std::log(static_cast<double>(p.n)));
    y.push_back(std::log(p.mean_error));
  }
  return least_squares(x, y);
}

RateCurve sharpness_curve(double eps, const std::vector<std::size_t>& n_grid,
                          std::size_t replications, std::uint64_t seed, unsigned threads) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("sharpness exponent must lie in (0, 1]");
  if (n_grid.empty() || n_grid.front() < 4) throw ParameterError("sharpness grid needs N >= 4");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw ParameterError("n_grid must be strictly increasing");
  if (replications < 2) throw ParameterError("sharpness curve needs >= 2 replications");

  RateCurve curve;
  for (std::size_t n : n_grid) {
    const double p = 1.0 / static_cast<double>(n);
    const double truth = oracle::sharpness_two_point(p, eps);
    std::vector<double> errors(replications);
    parallel_for(replications, threads, [&](std::size_t r) {
      const SampleVector s = sample(Bernoulli{p}, n, replication_seed(seed, n, r));
      const double ones = std::accumulate(s.values.begin(), s.values.end(), 0.0);
      const double p_hat = ones / static_cast<double>(n);
      errors[r] = std::abs(truth - oracle::sharpness_two_point(p_hat, eps));
    });
    const double m = mean_of(errors);
    curve.points.push_back({n, m, std_error_of(errors, m)});
  }
  return curve;
}

}  // namespace riskrates
