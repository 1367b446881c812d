#include "riskrates/risk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskrates/errors.hpp"

namespace riskrates {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr int kMaxBisection = 200;

void require_level(double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("AVaR level must lie in [0, 1)");
}

void require_tol(double tol) {
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
}

void validate_family(const SpectralFamily& family) {
  if (family.components.empty()) throw ParameterError("spectral family is empty");
  for (const auto& c : family.components) {
    if (c.levels.empty()) throw ParameterError("spectral component has no levels");
    if (!(c.penalty >= 0.0) || !std::isfinite(c.penalty))
      throw ParameterError("spectral penalty must be finite and nonnegative");
    double total = 0.0;
    for (const auto& [u, w] : c.levels) {
      require_level(u);
      if (!(w >= 0.0)) throw ParameterError("spectral masses must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw ParameterError("spectral component masses must sum to 1");
  }
}

}  // namespace

void validate(const RiskSpec& spec) {
  std::visit(overloaded{
                 [](const AvarSpec& s) { require_level(s.u); },
                 [](const OceSpec&) {},
                 [](const ShortfallSpec& s) {
                   if (!s.loss.strictly_increasing())
                     throw ContractError("shortfall risk needs a strictly increasing loss, got " +
                                         s.loss.name());
                 },
                 [](const SpectralFamily& f) { validate_family(f); },
                 [](const SharpnessSpec& s) {
                   if (!(s.eps > 0.0 && s.eps <= 1.0))
                     throw DomainError("sharpness exponent must lie in (0, 1]");
                 },
             },
             spec);
}

std::string describe(const RiskSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{
                 [&](const AvarSpec& s) { out << "avar(u=" << s.u << ")"; },
                 [&](const OceSpec& s) { out << "oce(" << s.loss.name() << ")"; },
                 [&](const ShortfallSpec& s) { out << "sf(" << s.loss.name() << ")"; },
                 [&](const SpectralFamily& f) {
                   out << "spectral(" << f.components.size() << " components)";
                 },
                 [&](const SharpnessSpec& s) { out << "sharpness(eps=" << s.eps << ")"; },
             },
             spec);
  return out.str();
}

double upper_tail_integral(const FiniteDiscrete& law, double mass) {
  const auto& xs = law.atoms();
  const auto& ws = law.weights();
  double remaining = mass;
  double total = 0.0;
  for (std::size_t i = xs.size(); i-- > 0 && remaining > 0.0;) {
    const double take = std::min(ws[i], remaining);
    total += take * xs[i];
    remaining -= take;
  }
  // Weights may sum to 1 − O(1e−16); the leftover belongs to the lowest atom.
  if (remaining > 0.0) total += remaining * xs.front();
  return total;
}

double avar(const FiniteDiscrete& law, double u) {
  require_level(u);
  if (u == 0.0) return law.mean();
  const double mass = 1.0 - u;
  return upper_tail_integral(law, mass) / mass;
}

OceResult oce(const FiniteDiscrete& law, const LossFunction& loss, double tol) {
  require_tol(tol);
  const auto& xs = law.atoms();
  const auto& ws = law.weights();

  auto objective = [&](double m) {
    double s = m;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * loss(xs[i] - m);
    return s;
  };
  // One-sided derivatives of m ↦ objective(m).
  auto left_slope = [&](double m) {
    double s = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s -= ws[i] * loss.right_derivative(xs[i] - m);
    return s;
  };
  auto right_slope = [&](double m) {
    double s = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s -= ws[i] * loss.left_derivative(xs[i] - m);
    return s;
  };

  const double bound = 1.0 + std::max(std::abs(law.min()), std::abs(law.max()));
  OceResult result;
  result.lo = -bound;
  result.hi = bound;

  double lo = -bound;
  double hi = bound;
  double f_lo = objective(lo);
  double f_hi = objective(hi);
  double gap = 0.0;
  for (std::size_t it = 0;; ++it) {
    // On [lo, hi] the convex objective stays above both supporting lines.
    const double width = hi - lo;
    const double lower = std::max(f_lo + std::min(right_slope(lo), 0.0) * width,
                                  f_hi - std::max(left_slope(hi), 0.0) * width);
    const double best = std::min(f_lo, f_hi);
    gap = best - lower;
    const double mid = lo + 0.5 * width;
    const bool stalled = !(mid > lo && mid < hi);
    if (gap <= tol || stalled) {
      result.iterations = it;
      result.value = best;
      result.minimizer_m = f_lo <= f_hi ? lo : hi;
      return result;
    }
    if (it >= kMaxBisection) break;
    if (left_slope(mid) < 0.0) {
      lo = mid;
      f_lo = objective(lo);
    } else {
      hi = mid;
      f_hi = objective(hi);
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "OCE bisection did not converge: certified gap " << gap << " > tol " << tol;
  throw NumericError(msg.str());
}

double shortfall(const FiniteDiscrete& law, const LossFunction& loss, double tol) {
  require_tol(tol);
  validate(RiskSpec{ShortfallSpec{loss}});
  const auto& xs = law.atoms();
  const auto& ws = law.weights();
  // Decreasing in m; the root of excess(m) = 0 is the shortfall risk.
  auto excess = [&](double m) {
    double s = -1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * loss(xs[i] - m);
    return s;
  };

  double lo = law.min() - 1.0;
  double hi = law.max() + 1.0;
  double step = hi - lo;
  int expansions = 0;
  while (excess(lo) < 0.0) {
    if (++expansions > 64) throw InfeasibleError("shortfall bracket cannot reach level 1 from below");
    lo -= step;
    step *= 2.0;
  }
  step = hi - lo;
  expansions = 0;
  while (excess(hi) > 0.0) {
    if (++expansions > 64) throw InfeasibleError("shortfall bracket cannot reach level 1 from above");
    hi += step;
    step *= 2.0;
  }
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= tol || !(mid > lo && mid < hi)) return mid;
    const double e = excess(mid);
    if (e == 0.0) return mid;
    (e > 0.0 ? lo : hi) = mid;
  }
  throw NumericError("shortfall bisection hit the iteration cap");
}

double spectral_risk(const FiniteDiscrete& law, const SpectralFamily& family) {
  validate_family(family);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : family.components) {
    double mix = 0.0;
    for (const auto& [u, w] : c.levels) mix += w * avar(law, u);
    best = std::max(best, mix - c.penalty);
  }
  return best;
}

double sharpness_risk(const FiniteDiscrete& law, double eps) {
  validate(RiskSpec{SharpnessSpec{eps}});
  const auto& xs = law.atoms();
  const auto& ws = law.weights();
  const double mean = law.mean();

  // Walk the atoms from the top; after step k, tail mass S and integral T.
  double best = mean;  // s = 1 and the s → 0 limit both give E[X]
  double s_prev = 0.0;
  double t_prev = 0.0;
  for (std::size_t i = xs.size(); i-- > 0;) {
    const double a = xs[i];
    const double s_next = i == 0 ? 1.0 : std::min(1.0, s_prev + ws[i]);
    const double t_next = i == 0 ? mean : t_prev + a * ws[i];
    // Piece (s_prev, s_next]: T(s) = a·s + c.
    const double c = t_prev - a * s_prev;
    if (eps < 1.0 && a != mean) {
      const double s_star = (1.0 - eps) * c / (eps * (a - mean));
      if (s_star > s_prev && s_star < s_next) {
        const double v = mean + (a - mean) * std::pow(s_star, eps) + c * std::pow(s_star, eps - 1.0);
        best = std::max(best, v);
      }
    }
    if (s_next > 0.0) {
      const double se = std::pow(s_next, eps);
      best = std::max(best, (1.0 - se) * mean + se * (t_next / s_next));
    }
    s_prev = s_next;
    t_prev = t_next;
  }
  return best;
}

double evaluate(const FiniteDiscrete& law, const RiskSpec& spec, double tol) {
  validate(spec);
  return std::visit(overloaded{
                        [&](const AvarSpec& s) { return avar(law, s.u); },
                        [&](const OceSpec& s) { return oce(law, s.loss, tol).value; },
                        [&](const ShortfallSpec& s) { return shortfall(law, s.loss, tol); },
                        [&](const SpectralFamily& f) { return spectral_risk(law, f); },
                        [&](const SharpnessSpec& s) { return sharpness_risk(law, s.eps); },
                    },
                    spec);
}

}  // namespace riskrates
