// Acceptance runs. One PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "axiom_suite.hpp"
#include "riskrates/dist.hpp"
#include "riskrates/experiments.hpp"
#include "riskrates/hedge.hpp"
#include "riskrates/oracle.hpp"
#include "riskrates/risk.hpp"

using namespace riskrates;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

unsigned thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<std::size_t> powers_of_two(int from, int to) {
  std::vector<std::size_t> out;
  for (int k = from; k <= to; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

ExperimentConfig oce_rate_config() {
  ExperimentConfig c;
  c.dist = Bernoulli{0.3};
  c.objective = RiskSpec{OceSpec{LossFunction::linear_above(2.0)}};
  c.strategies = Singleton{};
  c.n_grid = powers_of_two(7, 13);
  c.replications = 2000;
  c.threads = thread_count();
  return c;
}

Outcome slope_in_band(const RateCurve& curve, double min_r2) {
  const RateFit fit = fit_rate(curve);
  const bool ok = fit.slope >= -0.65 && fit.slope <= -0.35 && fit.r_squared >= min_r2;
  return {ok, fmt("slope=%.4f r2=%.4f", fit.slope, fit.r_squared)};
}

Outcome closed_forms() {
  double worst_avar = 0.0, worst_sharp = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double p = i / 21.0;
    const FiniteDiscrete law({0.0, 1.0}, {1.0 - p, p});
    for (int j = 0; j < 20; ++j) {
      const double u = j / 20.0;
      worst_avar = std::max(worst_avar, std::abs(avar(law, u) - oracle::avar_bernoulli(p, u)));
      for (double eps : {0.25, 0.5, 1.0})
        worst_sharp = std::max(worst_sharp, std::abs(sharpness_risk(law, eps) -
                                                     oracle::sharpness_two_point(p, eps)));
    }
  }
  return {worst_avar <= 1e-12 && worst_sharp <= 1e-12,
          fmt("max avar diff=%.3g max sharpness diff=%.3g", worst_avar, worst_sharp)};
}

Outcome dual_path() {
  const auto r = testing::check_avar_equivalence();
  return {r.ok, r.detail};
}

Outcome plain_rate() { return slope_in_band(mean_error_curve(oce_rate_config()), 0.95); }

Outcome hedged_rate() {
  ExperimentConfig c = oce_rate_config();
  c.options = {PayoffTransform{PayoffTransform::Kind::Centered}};
  c.strategies = Box{{-1.0}, {1.0}};
  return slope_in_band(mean_error_curve(c), 0.0);
}

Outcome deviation_shape() {
  ExperimentConfig c = oce_rate_config();
  c.n_grid = powers_of_two(7, 12);
  c.replications = 5000;
  c.epsilons = {0.05};
  const DeviationCurve curve = deviation_curve(c);
  const double floor = 10.0 / static_cast<double>(c.replications);
  std::vector<double> n, logp;
  bool decreasing = true;
  double previous = 2.0;
  for (const auto& p : curve.points) {
    if (p.p_hat > previous) decreasing = false;
    if (p.p_hat >= floor) {
      if (p.p_hat >= previous) decreasing = false;
      n.push_back(static_cast<double>(p.n));
      logp.push_back(std::log(p.p_hat));
    }
    previous = p.p_hat;
  }
  if (n.size() < 3) return {false, fmt("only %.0f points above the floor", double(n.size()))};
  const RateFit fit = least_squares(n, logp);
  return {decreasing && fit.slope < 0 && fit.r_squared >= 0.85,
          fmt("points=%.0f slope=%.3g r2=%.4f", double(n.size()), fit.slope, fit.r_squared) +
              (decreasing ? "" : " not decreasing")};
}

Outcome bias_direction() {
  ExperimentConfig c = oce_rate_config();
  c.n_grid = {10, 20, 50};
  c.replications = 5000;
  bool ok = true;
  std::string detail;
  for (std::size_t n : c.n_grid) {
    const BiasReport b = bias_report(c, n);
    ok = ok && b.mean_signed_error <= 3 * b.std_error;
    if (n == 10) ok = ok && b.mean_signed_error < -3 * b.std_error;
    detail += fmt("N=%.0f bias=%.5f se=%.5f; ", double(n), b.mean_signed_error, b.std_error);
  }
  return {ok, detail};
}

Outcome sharpness_lower_bound() {
  const RateCurve curve = sharpness_curve(0.5, powers_of_two(6, 14), 2000, 0x5EED, thread_count());
  Outcome out = slope_in_band(curve, 0.0);
  double min_constant = INFINITY;
  for (const auto& p : curve.points)
    min_constant = std::min(min_constant, p.mean_error * std::sqrt(static_cast<double>(p.n)));
  out.ok = out.ok && min_constant >= 0.3;
  out.detail += fmt(" min sqrt(N)*error=%.4f", min_constant);
  return out;
}

Outcome pareto_closed_form() {
  const SampleVector s = sample(ParetoTail{2.0}, 1'000'000, 0x5EED);
  const FiniteDiscrete law = empirical(s);
  const double n = static_cast<double>(s.values.size());
  bool ok = true;
  std::string detail;
  for (double u : {0.0, 0.5, 0.9}) {
    const double est = avar(law, u);
    const double var_u = quantile(law, u);
    // Influence function of the tail average.
    double m = 0.0, m2 = 0.0;
    for (double x : s.values) {
      const double psi = var_u + std::max(x - var_u, 0.0) / (1.0 - u);
      m += psi;
      m2 += psi * psi;
    }
    m /= n;
    const double se = std::sqrt(std::max(m2 / n - m * m, 0.0) / n);
    const double truth = oracle::avar_pareto(2.0, u);
    ok = ok && std::abs(est - truth) <= 3 * se;
    detail += fmt("u=%.1f est=%.5f truth=%.5f", u, est, truth) + fmt(" z=%.2f; ", (est - truth) / se);
  }
  return {ok, detail};
}

Outcome unboundedness() {
  const std::vector<double> dir{1.0};
  const ScenarioSet negative({0.5, 0.5}, {0.0, 0.0}, {-1.0, -2.0}, 1);
  const ScenarioSet symmetric({0.5, 0.5}, {0.0, 0.0}, {1.0, -1.0}, 1);
  const auto a = unboundedness_probe(negative, AvarSpec{0.5}, dir, 1e4, 9);
  const auto b = unboundedness_probe(symmetric, AvarSpec{0.5}, dir, 1e4, 9);
  return {a.diverging && !b.diverging,
          std::string("negative diverging=") + (a.diverging ? "true" : "false") +
              " symmetric diverging=" + (b.diverging ? "true" : "false")};
}

Outcome utility_rate() {
  ExperimentConfig c;
  c.dist = Bernoulli{0.3};
  c.objective = Utility::exponential(1.0);
  c.options = {PayoffTransform{PayoffTransform::Kind::Centered}};
  c.strategies = Box{{0.0}, {1.0}};
  c.n_grid = powers_of_two(7, 12);
  c.replications = 1000;
  c.threads = thread_count();
  return slope_in_band(mean_error_curve(c), 0.0);
}

Outcome axiom_suite() {
  std::string failed;
  for (const auto& r : testing::run_axiom_suite())
    if (!r.ok) failed += r.name + ": " + r.detail + "; ";
  return {failed.empty(), failed.empty() ? "all property checks hold" : failed};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "closed-form AVaR and sharpness on two-point laws", 1, closed_forms},
      {2, "AVaR tail average vs OCE minimization", 10, dual_path},
      {3, "sqrt(N) rate, OCE without trading", 120, plain_rate},
      {4, "sqrt(N) rate, OCE with a centered option on [-1,1]", 600, hedged_rate},
      {5, "deviation probability decays in N", 300, deviation_shape},
      {6, "plug-in OCE bias is not positive", 60, bias_direction},
      {7, "sharpness lower bound under Ber(1/N)", 120, sharpness_lower_bound},
      {8, "Pareto(2) AVaR closed form", 30, pareto_closed_form},
      {9, "unbounded strategy probe", 1, unboundedness},
      {10, "exponential utility rate", 300, utility_rate},
      {11, "risk-measure axiom suite", 30, axiom_suite},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      out.ok = false;
      out.detail += fmt(" over time budget %.0f s", c.budget_seconds);
    }
    failures += !out.ok;
    std::printf("%s criterion %2d: %s | %s | %.2f s\n", out.ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
