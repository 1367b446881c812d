#include "riskrates/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riskrates/csv.hpp"
#include "riskrates/errors.hpp"
#include "riskrates/rng.hpp"

namespace riskrates {
namespace {

constexpr double kWeightSumTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw ParameterError(std::string(what) + " must be finite");
}

}  // namespace

FiniteDiscrete::FiniteDiscrete(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.empty()) throw ParameterError("finite discrete law needs at least one atom");
  if (atoms.size() != weights.size())
    throw ParameterError("atoms and weights differ in length");
  require_finite(atoms, "atoms");
  require_finite(weights, "weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ParameterError("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total << ", expected 1";
    throw ParameterError(msg.str());
  }
  *this = from_weighted(atoms, weights);
}

FiniteDiscrete FiniteDiscrete::from_weighted(std::span<const double> values,
                                             std::span<const double> weights) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (weights[i] > 0.0) pairs.emplace_back(values[i], weights[i]);
  if (pairs.empty()) throw ParameterError("law has no positive-weight atom");
  // Full lexicographic order so merged weights are summed in a canonical order.
  std::sort(pairs.begin(), pairs.end());
  FiniteDiscrete law;
  law.atoms_.reserve(pairs.size());
  law.weights_.reserve(pairs.size());
  for (const auto& [x, w] : pairs) {
    if (!law.atoms_.empty() && law.atoms_.back() == x) {
      law.weights_.back() += w;
    } else {
      law.atoms_.push_back(x);
      law.weights_.push_back(w);
    }
  }
  return law;
}

FiniteDiscrete FiniteDiscrete::from_sample(std::span<const double> sample) {
  if (sample.empty()) throw EmptyInputError("empirical law of an empty sample");
  require_finite(sample, "sample values");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  FiniteDiscrete law;
  law.sample_size_ = sorted.size();
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    law.atoms_.push_back(sorted[i]);
    law.counts_.push_back(j - i);
    law.weights_.push_back(static_cast<double>(j - i) / n);
    i = j;
  }
  return law;
}

FiniteDiscrete FiniteDiscrete::point_mass(double c) { return FiniteDiscrete({c}, {1.0}); }

double FiniteDiscrete::mean() const {
  if (is_empirical()) {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      s += atoms_[i] * static_cast<double>(counts_[i]);
    return s / static_cast<double>(sample_size_);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += atoms_[i] * weights_[i];
  return s;
}

FiniteDiscrete FiniteDiscrete::affine(double scale, double shift) const {
  if (!std::isfinite(scale) || !std::isfinite(shift))
    throw ParameterError("affine map needs finite coefficients");
  if (scale == 0.0) return point_mass(shift);
  FiniteDiscrete out = *this;
  for (double& x : out.atoms_) x = scale * x + shift;
  if (scale < 0.0) {
    std::reverse(out.atoms_.begin(), out.atoms_.end());
    std::reverse(out.weights_.begin(), out.weights_.end());
    std::reverse(out.counts_.begin(), out.counts_.end());
  }
  // Rounding can collapse neighbouring atoms; re-canonicalize if it did.
  if (std::adjacent_find(out.atoms_.begin(), out.atoms_.end(),
                         [](double a, double b) { return !(a < b); }) != out.atoms_.end()) {
    FiniteDiscrete merged = from_weighted(out.atoms_, out.weights_);
    return merged;
  }
  return out;
}

void validate(const Distribution& dist) {
  std::visit(overloaded{
                 [](const Bernoulli& b) {
                   if (!(b.p >= 0.0 && b.p <= 1.0))
                     throw ParameterError("Bernoulli p must lie in [0, 1]");
                 },
                 [](const ParetoTail& t) {
                   if (!(t.q > 1.0) || !std::isfinite(t.q))
                     throw ParameterError("Pareto tail index q must be > 1");
                 },
                 [](const FiniteDiscrete& d) {
                   if (d.size() == 0) throw ParameterError("empty finite discrete law");
                 },
             },
             dist);
}

std::string describe(const Distribution& dist) {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{
                 [&](const Bernoulli& b) { out << "bernoulli(p=" << b.p << ")"; },
                 [&](const ParetoTail& t) { out << "pareto(q=" << t.q << ")"; },
                 [&](const FiniteDiscrete& d) {
                   out << (d.is_empirical() ? "empirical(n=" : "discrete(atoms=")
                       << (d.is_empirical() ? d.sample_size() : d.size()) << ")";
                 },
             },
             dist);
  return out.str();
}

FiniteDiscrete as_discrete(const Distribution& dist) {
  validate(dist);
  return std::visit(overloaded{
                        [](const Bernoulli& b) -> FiniteDiscrete {
                          return FiniteDiscrete({0.0, 1.0}, {1.0 - b.p, b.p});
                        },
                        [](const ParetoTail&) -> FiniteDiscrete {
                          throw ParameterError("Pareto tail law has no finite representation");
                        },
                        [](const FiniteDiscrete& d) { return d; },
                    },
                    dist);
}

bool is_finite_support(const Distribution& dist) {
  return !std::holds_alternative<ParetoTail>(dist);
}

double quantile(const Distribution& dist, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("quantile level must lie in [0, 1)");
  validate(dist);
  return std::visit(
      overloaded{
          [u](const Bernoulli& b) -> double {
            if (b.p == 1.0) return 1.0;
            return u <= 1.0 - b.p ? 0.0 : 1.0;
          },
          [u](const ParetoTail& t) { return std::pow(1.0 - u, -1.0 / t.q); },
          [u](const FiniteDiscrete& d) -> double {
            if (u == 0.0) return d.min();
            if (d.is_empirical()) {
              const double target = u * static_cast<double>(d.sample_size());
              std::size_t cum = 0;
              for (std::size_t k = 0; k < d.size(); ++k) {
                cum += d.counts()[k];
                if (static_cast<double>(cum) >= target) return d.atoms()[k];
              }
              return d.max();
            }
            double cum = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) {
              cum += d.weights()[k];
              if (cum >= u) return d.atoms()[k];
            }
            return d.max();
          },
      },
      dist);
}

double mean(const Distribution& dist) {
  validate(dist);
  return std::visit(overloaded{
                        [](const Bernoulli& b) { return b.p; },
                        [](const ParetoTail& t) { return t.q / (t.q - 1.0); },
                        [](const FiniteDiscrete& d) { return d.mean(); },
                    },
                    dist);
}

SampleVector sample(const Distribution& dist, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("sample size must be at least 1");
  validate(dist);
  CounterRng rng(derive_seed(seed, {}));
  SampleVector out;
  out.source_seed = seed;
  out.meta = describe(dist);
  out.values.resize(n);
  std::visit(overloaded{
                 [&](const Bernoulli& b) {
                   for (double& v : out.values) v = rng.uniform() < b.p ? 1.0 : 0.0;
                 },
                 [&](const ParetoTail& t) {
                   const double inv_q = 1.0 / t.q;
                   for (double& v : out.values) v = std::pow(1.0 - rng.uniform(), -inv_q);
                 },
                 [&](const FiniteDiscrete& d) {
                   std::vector<double> cum(d.size());
                   std::partial_sum(d.weights().begin(), d.weights().end(), cum.begin());
                   for (double& v : out.values) {
                     const double u = rng.uniform();
                     auto it = std::lower_bound(cum.begin(), cum.end(), u);
                     if (it == cum.end()) --it;
                     // lower_bound on u = 0 would pick the first atom: the infimum.
                     v = d.atoms()[static_cast<std::size_t>(it - cum.begin())];
                   }
                 },
             },
             dist);
  return out;
}

FiniteDiscrete empirical(const SampleVector& s) { return FiniteDiscrete::from_sample(s.values); }

SampleVector load_samples(const std::filesystem::path& path, const ColumnRef& column) {
  const csv::Table table = csv::read(path);
  std::size_t idx = 0;
  if (const auto* name = std::get_if<std::string>(&column)) {
    idx = table.column(*name);
  } else {
    idx = std::get<std::size_t>(column);
    if (idx >= table.header.size())
      throw SchemaError("column index " + std::to_string(idx) + " out of range");
  }
  SampleVector out;
  out.meta = "csv:" + path.string() + "#" + table.header[idx];
  out.values.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (idx >= row.cells.size())
      throw ParseError("missing cell at line " + std::to_string(row.line));
    out.values.push_back(csv::parse_real(row.cells[idx], row.line));
  }
  if (out.values.empty()) throw EmptyInputError("'" + path.string() + "' has no data rows");
  return out;
}

}  // namespace riskrates
