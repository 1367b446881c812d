#include "riskrates/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riskrates/errors.hpp"

namespace riskrates {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kFeasibilityTol = 1e-9;
constexpr std::size_t kMaxLatticePoints = 100000;

using Objective = std::function<double(std::span<const double>)>;

/// Golden-section search for a convex φ on [a, b]; the endpoints are
/// evaluated as well so boundary minima are hit exactly.
std::pair<double, double> golden_section(const std::function<double(double)>& phi, double a,
                                         double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double best_t = a;
  double best_v = phi(a);
  auto consider = [&](double t, double v) {
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  };
  consider(b, phi(b));
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  consider(c, fc);
  consider(d, fd);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      if (!(c > a && c < d)) break;
      fc = phi(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      if (!(d > c && d < b)) break;
      fd = phi(d);
      consider(d, fd);
    }
  }
  return {best_t, best_v};
}

std::vector<std::vector<double>> box_lattice(const Box& box, std::size_t per_axis) {
  const std::size_t e = box.lo.size();
  if (e > 0) {
    while (per_axis > 2 && std::pow(static_cast<double>(per_axis), static_cast<double>(e)) >
                               static_cast<double>(kMaxLatticePoints))
      --per_axis;
  }
  std::vector<std::vector<double>> axes(e);
  for (std::size_t k = 0; k < e; ++k) {
    if (box.lo[k] == box.hi[k]) {
      axes[k] = {box.lo[k]};
      continue;
    }
    for (std::size_t i = 0; i < per_axis; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(per_axis - 1);
      axes[k].push_back(i + 1 == per_axis ? box.hi[k] : box.lo[k] + frac * (box.hi[k] - box.lo[k]));
    }
  }
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> idx(e, 0);
  while (true) {
    std::vector<double> p(e);
    for (std::size_t k = 0; k < e; ++k) p[k] = axes[k][idx[k]];
    points.push_back(std::move(p));
    std::size_t k = e;
    while (k > 0) {
      --k;
      if (++idx[k] < axes[k].size()) break;
      idx[k] = 0;
      if (k == 0) return points;
    }
    if (e == 0) return points;
  }
}

void compositions(std::size_t parts, std::size_t total, std::vector<std::size_t>& cur,
                  std::vector<std::vector<double>>& out, std::size_t resolution) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    std::vector<double> p(parts);
    for (std::size_t i = 0; i < parts; ++i)
      p[i] = static_cast<double>(cur[i]) / static_cast<double>(resolution);
    out.push_back(std::move(p));
    cur.pop_back();
    return;
  }
  for (std::size_t k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(parts, total - k, cur, out, resolution);
    cur.pop_back();
  }
}

std::vector<std::vector<double>> simplex_lattice(std::size_t e, std::size_t resolution) {
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> cur;
  compositions(e, resolution, cur, out, resolution);
  return out;
}

struct Direction {
  std::vector<double> d;
  std::size_t i = 0;  // for simplex exchanges: mass moves from j to i
  std::size_t j = 0;
};

std::vector<Direction> search_directions(const StrategySet& set) {
  std::vector<Direction> dirs;
  if (const auto* box = std::get_if<Box>(&set)) {
    const std::size_t e = box->lo.size();
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < e; ++k)
      if (box->lo[k] < box->hi[k]) free.push_back(k);
    for (std::size_t k : free) {
      Direction dir{std::vector<double>(e, 0.0)};
      dir.d[k] = 1.0;
      dirs.push_back(std::move(dir));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t a = 0; a < free.size(); ++a)
      for (std::size_t b = a + 1; b < free.size(); ++b)
        for (double sign : {1.0, -1.0}) {
          Direction dir{std::vector<double>(e, 0.0)};
          dir.d[free[a]] = s;
          dir.d[free[b]] = sign * s;
          dirs.push_back(std::move(dir));
        }
  } else if (const auto* simplex = std::get_if<Simplex>(&set)) {
    for (std::size_t i = 0; i < simplex->e; ++i)
      for (std::size_t j = i + 1; j < simplex->e; ++j) {
        Direction dir{std::vector<double>(simplex->e, 0.0), i, j};
        dir.d[i] = 1.0;
        dir.d[j] = -1.0;
        dirs.push_back(std::move(dir));
      }
  }
  return dirs;
}

/// Feasible step interval [tmin, tmax] for x + t·d.
std::pair<double, double> step_range(const StrategySet& set, const std::vector<double>& x,
                                     const Direction& dir) {
  if (const auto* box = std::get_if<Box>(&set)) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (dir.d[k] == 0.0) continue;
      double a = (box->lo[k] - x[k]) / dir.d[k];
      double b = (box->hi[k] - x[k]) / dir.d[k];
      if (a > b) std::swap(a, b);
      tmin = std::max(tmin, a);
      tmax = std::min(tmax, b);
    }
    return {std::min(tmin, 0.0), std::max(tmax, 0.0)};
  }
  return {-x[dir.i], x[dir.j]};
}

void apply_step(const StrategySet& set, std::vector<double>& x, const Direction& dir, double t) {
  if (const auto* box = std::get_if<Box>(&set)) {
    for (std::size_t k = 0; k < x.size(); ++k)
      x[k] = std::clamp(x[k] + t * dir.d[k], box->lo[k], box->hi[k]);
    return;
  }
  x[dir.i] = std::max(0.0, x[dir.i] + t);
  x[dir.j] = std::max(0.0, x[dir.j] - t);
}

struct Descent {
  std::vector<double> x;
  double value = 0.0;
  std::size_t cycles = 0;
  bool converged = true;
};

Descent descend(const Objective& objective, const StrategySet& set, std::vector<double> x,
                double fx, double tol, std::size_t max_cycles) {
  const double diam = diameter(set);
  Descent out{std::move(x), fx};
  if (diam == 0.0) return out;
  const auto dirs = search_directions(set);
  const double stop_radius = tol * (1.0 + diam);
  const double line_tol = 0.1 * tol;
  double radius = diam;
  std::vector<double> trial(out.x.size());
  while (radius >= stop_radius) {
    if (out.cycles >= max_cycles) {
      out.converged = false;
      return out;
    }
    ++out.cycles;
    double max_step = 0.0;
    for (const auto& dir : dirs) {
      auto [tmin, tmax] = step_range(set, out.x, dir);
      tmin = std::max(tmin, -radius);
      tmax = std::min(tmax, radius);
      if (!(tmax - tmin > 0.0)) continue;
      auto phi = [&](double t) {
        trial = out.x;
        apply_step(set, trial, dir, t);
        return objective(trial);
      };
      const auto [t, v] = golden_section(phi, tmin, tmax, line_tol);
      if (v < out.value) {
        apply_step(set, out.x, dir, t);
        out.value = v;
        max_step = std::max(max_step, std::abs(t));
      }
    }
    radius = std::clamp(2.0 * max_step, radius / 8.0, diam);
  }
  return out;
}

void check_dimension(const ScenarioSet& scenarios, const StrategySet& set) {
  validate(set);
  if (dimension(set) != scenarios.options()) {
    std::ostringstream msg;
    msg << "strategy set has dimension " << dimension(set) << " but scenarios carry "
        << scenarios.options() << " option columns";
    throw ParameterError(msg.str());
  }
}

}  // namespace

ScenarioSet::ScenarioSet(std::vector<double> weights, std::vector<double> f,
                         std::vector<double> g, std::size_t options)
    : weights_(std::move(weights)), f_(std::move(f)), g_(std::move(g)), options_(options) {
  if (weights_.empty()) throw ParameterError("scenario set is empty");
  if (f_.size() != weights_.size() || g_.size() != weights_.size() * options_)
    throw ParameterError("scenario set columns have inconsistent lengths");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("scenario weights must be >= 0");
    total += w;
  }
  // Rounding in a sum of n terms grows like n·ulp.
  const double slack = 1e-12 * std::max(1.0, static_cast<double>(weights_.size()) / 1000.0);
  if (std::abs(total - 1.0) > slack) throw ParameterError("scenario weights must sum to 1");
  for (double v : f_)
    if (!std::isfinite(v)) throw ParameterError("position payoffs must be finite");
  for (double v : g_)
    if (!std::isfinite(v)) throw ParameterError("option payoffs must be finite");
}

std::vector<double> ScenarioSet::outcome(std::span<const double> strategy) const {
  std::vector<double> out(f_);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < options_; ++j) out[i] += strategy[j] * g_[i * options_ + j];
  return out;
}

FiniteDiscrete ScenarioSet::outcome_law(std::span<const double> strategy) const {
  if (strategy.size() != options_) throw ParameterError("strategy has wrong dimension");
  const auto values = outcome(strategy);
  return FiniteDiscrete::from_weighted(values, weights_);
}

ScenarioSet ScenarioSet::shifted(double c) const {
  ScenarioSet out = *this;
  for (double& v : out.f_) v += c;
  return out;
}

std::size_t dimension(const StrategySet& set) {
  return std::visit(overloaded{
                        [](const Singleton& s) { return s.g.size(); },
                        [](const Box& b) { return b.lo.size(); },
                        [](const Simplex& s) { return s.e; },
                    },
                    set);
}

void validate(const StrategySet& set) {
  std::visit(overloaded{
                 [](const Singleton& s) {
                   for (double v : s.g)
                     if (!std::isfinite(v)) throw ParameterError("singleton strategy must be finite");
                 },
                 [](const Box& b) {
                   if (b.lo.size() != b.hi.size())
                     throw ParameterError("box bounds differ in length");
                   for (std::size_t k = 0; k < b.lo.size(); ++k) {
                     if (!std::isfinite(b.lo[k]) || !std::isfinite(b.hi[k]))
                       throw ParameterError("box bounds must be finite");
                     if (b.lo[k] > b.hi[k]) throw ParameterError("box needs lo <= hi");
                   }
                 },
                 [](const Simplex& s) {
                   if (s.e == 0) throw ParameterError("simplex dimension must be >= 1");
                 },
             },
             set);
}

double diameter(const StrategySet& set) {
  return std::visit(overloaded{
                        [](const Singleton&) { return 0.0; },
                        [](const Box& b) {
                          double s = 0.0;
                          for (std::size_t k = 0; k < b.lo.size(); ++k)
                            s += (b.hi[k] - b.lo[k]) * (b.hi[k] - b.lo[k]);
                          return std::sqrt(s);
                        },
                        [](const Simplex& s) { return s.e > 1 ? std::sqrt(2.0) : 0.0; },
                    },
                    set);
}

double violation(const StrategySet& set, std::span<const double> g) {
  return std::visit(overloaded{
                        [&](const Singleton& s) {
                          double v = 0.0;
                          for (std::size_t k = 0; k < g.size(); ++k)
                            v = std::max(v, std::abs(g[k] - s.g[k]));
                          return v;
                        },
                        [&](const Box& b) {
                          double v = 0.0;
                          for (std::size_t k = 0; k < g.size(); ++k)
                            v = std::max({v, b.lo[k] - g[k], g[k] - b.hi[k]});
                          return v;
                        },
                        [&](const Simplex&) {
                          double v = 0.0;
                          double sum = 0.0;
                          for (double x : g) {
                            v = std::max(v, -x);
                            sum += x;
                          }
                          return std::max(v, std::abs(sum - 1.0));
                        },
                    },
                    set);
}

HedgeResult minimize_convex(const Objective& objective, const StrategySet& set, double tol,
                            const HedgeOptions& options) {
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
  validate(set);
  HedgeResult result;
  if (const auto* single = std::get_if<Singleton>(&set)) {
    result.g_star = single->g;
    result.value = objective(result.g_star);
    return result;
  }
  std::vector<std::vector<double>> lattice =
      std::holds_alternative<Box>(set)
          ? box_lattice(std::get<Box>(set), options.lattice_per_axis)
          : simplex_lattice(std::get<Simplex>(set).e, std::max<std::size_t>(1, options.simplex_resolution));
  std::vector<double> values(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) values[i] = objective(lattice[i]);
  std::vector<std::size_t> order(lattice.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  const std::size_t starts = std::clamp<std::size_t>(options.restarts, 1, order.size());
  bool have_best = false;
  for (std::size_t s = 0; s < starts; ++s) {
    const std::size_t idx = order[s];
    Descent d = descend(objective, set, lattice[idx], values[idx], tol, options.max_cycles);
    result.inner_iterations += d.cycles;
    result.certified = result.certified && d.converged;
    if (!have_best || d.value < result.value) {
      result.value = d.value;
      result.g_star = std::move(d.x);
      have_best = true;
    }
  }
  result.restarts_used = starts;
  if (!result.certified) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "convex descent hit the cycle cap; best value " << result.value;
    throw ConvergenceError(msg.str(), result);
  }
  return result;
}

HedgeResult hedged_risk(const ScenarioSet& scenarios, const RiskSpec& risk,
                        const StrategySet& strategies, double tol, const HedgeOptions& options) {
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
  validate(risk);
  check_dimension(scenarios, strategies);

  const auto* sf = std::get_if<ShortfallSpec>(&risk);
  if (!sf) {
    if (scenarios.options() == 0 || std::holds_alternative<Singleton>(strategies)) {
      HedgeResult r;
      if (const auto* single = std::get_if<Singleton>(&strategies)) r.g_star = single->g;
      r.value = evaluate(scenarios.outcome_law(r.g_star), risk, tol);
      return r;
    }
    const double inner_tol = 0.1 * tol;
    auto objective = [&](std::span<const double> g) {
      return evaluate(scenarios.outcome_law(g), risk, inner_tol);
    };
    return minimize_convex(objective, strategies, tol, options);
  }

  // Shortfall: J(m) = inf_g E[l(F + g·G − m)] is strictly decreasing in m and
  // the hedged shortfall is the root of J(m) = 1.
  const LossFunction& loss = sf->loss;
  const auto& w = scenarios.weights();
  const StrategySet inner_set = scenarios.options() == 0 ? StrategySet{Singleton{}} : strategies;
  std::size_t inner_iterations = 0;
  auto solve_inner = [&](double m) {
    auto objective = [&](std::span<const double> g) {
      const auto x = scenarios.outcome(g);
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * loss(x[i] - m);
      return s;
    };
    HedgeResult r = minimize_convex(objective, inner_set, 0.1 * tol, options);
    inner_iterations += r.inner_iterations;
    return r;
  };

  double reach = 0.0;
  {
    double gmax = 0.0;
    std::visit(overloaded{
                   [&](const Singleton& s) {
                     for (double v : s.g) gmax = std::max(gmax, std::abs(v));
                   },
                   [&](const Box& b) {
                     for (std::size_t k = 0; k < b.lo.size(); ++k)
                       gmax = std::max({gmax, std::abs(b.lo[k]), std::abs(b.hi[k])});
                   },
                   [&](const Simplex&) { gmax = 1.0; },
               },
               inner_set);
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      double r = std::abs(scenarios.f()[i]);
      for (std::size_t j = 0; j < scenarios.options(); ++j) r += gmax * std::abs(scenarios.g(i, j));
      reach = std::max(reach, r);
    }
  }
  double lo = -reach - 1.0;
  double hi = reach + 1.0;
  double step = hi - lo;
  HedgeResult at_lo = solve_inner(lo);
  for (int k = 0; at_lo.value < 1.0; ++k) {
    if (k > 64) throw InfeasibleError("hedged shortfall: J(m) never reaches 1");
    lo -= step;
    step *= 2.0;
    at_lo = solve_inner(lo);
  }
  step = hi - lo;
  HedgeResult at_hi = solve_inner(hi);
  for (int k = 0; at_hi.value > 1.0; ++k) {
    if (k > 64) throw InfeasibleError("hedged shortfall: J(m) never drops to 1");
    hi += step;
    step *= 2.0;
    at_hi = solve_inner(hi);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= tol || !(mid > lo && mid < hi)) break;
    HedgeResult r = solve_inner(mid);
    if (r.value > 1.0) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = std::move(r);
    }
  }
  HedgeResult result;
  result.value = lo + 0.5 * (hi - lo);
  result.g_star = scenarios.options() == 0 ? std::vector<double>{} : at_hi.g_star;
  result.restarts_used = at_hi.restarts_used;
  result.inner_iterations = inner_iterations;
  return result;
}

Utility Utility::identity() {
  return {"identity", [](double x) { return x; }};
}

Utility Utility::exponential(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("exponential utility needs a > 0");
  return {"exp", [a](double x) { return -std::exp(-a * x); }};
}

bool check_utility_shape(const Utility& u, double span) {
  if (!u.fn) return false;
  constexpr int kPoints = 1000;
  std::vector<double> v(kPoints);
  for (int i = 0; i < kPoints; ++i) v[i] = u.fn(-span + 2.0 * span * i / (kPoints - 1));
  for (int i = 0; i + 1 < kPoints; ++i)
    if (v[i + 1] < v[i]) return false;
  for (int i = 0; i + 2 < kPoints; ++i) {
    const double chord = 0.5 * (v[i] + v[i + 2]);
    if (v[i + 1] < chord - 1e-9 * std::max(1.0, std::abs(chord))) return false;
  }
  return true;
}

HedgeResult utility_max(const ScenarioSet& scenarios, const Utility& utility,
                        const StrategySet& strategies, double tol, const HedgeOptions& options) {
  if (!check_utility_shape(utility))
    throw ContractError("utility '" + utility.name + "' is not concave nondecreasing");
  check_dimension(scenarios, strategies);
  const auto& w = scenarios.weights();
  auto negated = [&](std::span<const double> g) {
    const auto x = scenarios.outcome(g);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * utility.fn(x[i]);
    return -s;
  };
  const StrategySet set = scenarios.options() == 0 ? StrategySet{Singleton{}} : strategies;
  HedgeResult r = minimize_convex(negated, set, tol, options);
  r.value = -r.value;
  return r;
}

ProbeReport unboundedness_probe(const ScenarioSet& scenarios, const RiskSpec& risk,
                                std::span<const double> direction, double t_max,
                                std::size_t steps, double tol) {
  validate(risk);
  if (direction.size() != scenarios.options())
    throw ParameterError("probe direction has wrong dimension");
  if (!(t_max >= 100.0) || !std::isfinite(t_max))
    throw ParameterError("probe needs t_max >= 100 to span two decades");
  if (steps < 2) throw ParameterError("probe needs at least 2 steps");

  std::vector<double> g(direction.size());
  auto value_at = [&](double t) {
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = t * direction[k];
    return evaluate(scenarios.outcome_law(g), risk, tol);
  };
  ProbeReport report;
  const double log_max = std::log10(t_max);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = i + 1 == steps ? t_max
                                    : std::pow(10.0, log_max * static_cast<double>(i) /
                                                         static_cast<double>(steps - 1));
    report.values.emplace_back(t, value_at(t));
  }
  const double v2 = value_at(t_max / 100.0);
  const double v1 = value_at(t_max / 10.0);
  const double v0 = value_at(t_max);
  report.diverging = (v2 - v1 > 1.0) && (v1 - v0 > 1.0);
  return report;
}

}  // namespace riskrates
