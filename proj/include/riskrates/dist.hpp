#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riskrates {

struct Bernoulli {
  double p = 0.5;
};

/// Law with density q·x^(−(q+1)) on [1, ∞); P[X ≥ t] = t^(−q).
struct ParetoTail {
  double q = 2.0;
};

/// Finite law with sorted, distinct atoms and strictly positive weights.
///
/// Construction canonicalizes the input: zero-weight atoms are dropped,
/// equal atoms are merged and the result is sorted ascending. Two laws built
/// from permutations of the same (atom, weight) pairs compare equal.
///
/// Empirical laws additionally remember their multiplicities, so weights are
/// the exact quotients count/N.
class FiniteDiscrete {
 public:
  FiniteDiscrete() = default;

  /// Throws ParameterError on negative or non-finite input, mismatched
  /// lengths, or weights that do not sum to 1 within 1e−12.
  FiniteDiscrete(std::vector<double> atoms, std::vector<double> weights);

  /// Same as above but rescales the weights to sum to one. Used for
  /// intermediate outcome vectors whose weights were already validated.
  static FiniteDiscrete from_weighted(std::span<const double> values,
                                      std::span<const double> weights);

  /// Equal-weight law of a nonempty sample.
  static FiniteDiscrete from_sample(std::span<const double> sample);

  static FiniteDiscrete point_mass(double c);

  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// Multiplicities for empirical laws, empty otherwise.
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  std::size_t sample_size() const noexcept { return sample_size_; }
  bool is_empirical() const noexcept { return sample_size_ > 0; }

  std::size_t size() const noexcept { return atoms_.size(); }
  double min() const { return atoms_.front(); }
  double max() const { return atoms_.back(); }
  double mean() const;

  /// Law of a·X + b (a may be negative or zero).
  FiniteDiscrete affine(double scale, double shift) const;

  friend bool operator==(const FiniteDiscrete&, const FiniteDiscrete&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<std::size_t> counts_;
  std::size_t sample_size_ = 0;
};

using Distribution = std::variant<Bernoulli, ParetoTail, FiniteDiscrete>;

/// Throws ParameterError if the parameters are out of range.
void validate(const Distribution& dist);

std::string describe(const Distribution& dist);

/// Exact finite representation, or ParameterError for ParetoTail.
FiniteDiscrete as_discrete(const Distribution& dist);

bool is_finite_support(const Distribution& dist);

struct SampleVector {
  std::vector<double> values;
  std::uint64_t source_seed = 0;
  std::string meta;
};

/// n i.i.d. draws; a pure function of (dist, n, seed). Every variant is drawn
/// by inverse-CDF transform of one uniform per value.
SampleVector sample(const Distribution& dist, std::size_t n, std::uint64_t seed);

/// Equal-weight empirical law, with sorted distinct atoms.
FiniteDiscrete empirical(const SampleVector& sample);

/// Left-continuous generalized inverse inf{x : CDF(x) ≥ u}; quantile(0) is
/// the essential infimum. Throws DomainError unless 0 ≤ u < 1.
double quantile(const Distribution& dist, double u);

double mean(const Distribution& dist);

/// CSV column selector: header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

/// Reads one numeric column from a headed CSV file, keeping file order.
///
/// Throws IoError if the file cannot be opened, SchemaError if the column is
/// absent and ParseError (naming the 1-based file line) for empty or
/// non-numeric cells.
SampleVector load_samples(const std::filesystem::path& path, const ColumnRef& column);

}  // namespace riskrates
