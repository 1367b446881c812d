#include "riskrates/loss.hpp"

#include <algorithm>
#include <cmath>

#include "riskrates/errors.hpp"

namespace riskrates {

LossFunction LossFunction::avar_loss(double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("avar-loss level u must lie in [0, 1)");
  return {Kind::AvarLoss, u};
}

LossFunction LossFunction::exponential() { return {Kind::Exponential, 0.0}; }

LossFunction LossFunction::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("power loss needs 1 < p < inf");
  return {Kind::Power, p};
}

LossFunction LossFunction::linear_above(double slope) {
  if (!(slope >= 1.0) || !std::isfinite(slope))
    throw ParameterError("linear-above slope must be finite and >= 1");
  return {Kind::LinearAbove, slope};
}

std::string LossFunction::name() const {
  switch (kind_) {
    case Kind::AvarLoss:
      return "avar-loss(" + std::to_string(param_) + ")";
    case Kind::Exponential:
      return "exp";
    case Kind::Power:
      return "power(" + std::to_string(param_) + ")";
    case Kind::LinearAbove:
      return "linear-above(" + std::to_string(param_) + ")";
  }
  return "?";
}

double LossFunction::operator()(double x) const {
  const double xp = x > 0.0 ? x : 0.0;
  switch (kind_) {
    case Kind::AvarLoss:
      return xp / (1.0 - param_);
    case Kind::Exponential:
      return std::exp(x);
    case Kind::Power:
      return xp + std::pow(xp, param_) / param_;
    case Kind::LinearAbove:
      return param_ * xp;
  }
  return 0.0;
}

double LossFunction::right_derivative(double x) const {
  switch (kind_) {
    case Kind::AvarLoss:
      return x >= 0.0 ? 1.0 / (1.0 - param_) : 0.0;
    case Kind::Exponential:
      return std::exp(x);
    case Kind::Power:
      return x >= 0.0 ? 1.0 + std::pow(x, param_ - 1.0) : 0.0;
    case Kind::LinearAbove:
      return x >= 0.0 ? param_ : 0.0;
  }
  return 0.0;
}

double LossFunction::left_derivative(double x) const {
  switch (kind_) {
    case Kind::AvarLoss:
      return x > 0.0 ? 1.0 / (1.0 - param_) : 0.0;
    case Kind::Exponential:
      return std::exp(x);
    case Kind::Power:
      return x > 0.0 ? 1.0 + std::pow(x, param_ - 1.0) : 0.0;
    case Kind::LinearAbove:
      return x > 0.0 ? param_ : 0.0;
  }
  return 0.0;
}

double LossFunction::growth_degree() const noexcept {
  switch (kind_) {
    case Kind::AvarLoss:
    case Kind::LinearAbove:
      return 1.0;
    case Kind::Power:
      return param_;
    case Kind::Exponential:
      return kInfiniteGrowth;
  }
  return kInfiniteGrowth;
}

bool LossFunction::superlinear() const noexcept {
  switch (kind_) {
    case Kind::AvarLoss:
      return param_ > 0.0;
    case Kind::LinearAbove:
      return param_ > 1.0;
    case Kind::Power:
    case Kind::Exponential:
      return true;
  }
  return false;
}

bool check_loss_axioms(const LossFunction& loss, double span) {
  constexpr int kPoints = 1000;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPoints; ++i) {
    const double x = -span + 2.0 * span * i / (kPoints - 1);
    const double lx = loss(x);
    if (!(lx >= 0.0) || lx < prev) return false;
    prev = lx;
    if (i + 2 < kPoints) {
      const double y = -span + 2.0 * span * (i + 2) / (kPoints - 1);
      const double mid = loss(0.5 * (x + y));
      const double chord = 0.5 * (lx + loss(y));
      if (mid > chord + 1e-9 * std::max(1.0, std::abs(chord))) return false;
    }
  }
  return loss.left_derivative(0.0) <= 1.0 && loss.right_derivative(0.0) >= 1.0;
}

}  // namespace riskrates
