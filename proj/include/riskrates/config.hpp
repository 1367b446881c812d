#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "riskrates/dist.hpp"
#include "riskrates/experiments.hpp"
#include "riskrates/hedge.hpp"
#include "riskrates/risk.hpp"

// JSON and CSV (de)serialization of the public types. Every reader rejects
// unknown keys with SchemaError; relative file paths inside a config are
// resolved against `base`.
namespace riskrates::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

LossFunction loss_from_json(const Json& j);
Json to_json(const LossFunction& loss);

RiskSpec risk_from_json(const Json& j);
Json to_json(const RiskSpec& spec);

StrategySet strategies_from_json(const Json& j);
Json to_json(const StrategySet& set);

/// {"kind":"bernoulli","p":…} | {"kind":"pareto","q":…} |
/// {"kind":"discrete","atoms":[…],"weights":[…]} |
/// {"kind":"csv","path":…,"column":name-or-index}  (empirical law of the column)
Distribution distribution_from_json(const Json& j, const std::filesystem::path& base = {});

/// {"kind":"identity"} | {"kind":"exp","a":…}
Utility utility_from_json(const Json& j);

/// "identity" | "centered" | {"kind":"call"|"put","strike":…,"price":…}
PayoffTransform payoff_from_json(const Json& j);
Json to_json(const PayoffTransform& t);

/// CSV with columns weight, f, g1..ge.
ScenarioSet load_scenarios(const std::filesystem::path& path);
void save_scenarios(const ScenarioSet& scenarios, const std::filesystem::path& path);
/// {"csv": path} or inline {"weights":[…],"f":[…],"g":[[…],…]} (g row per scenario).
ScenarioSet scenarios_from_json(const Json& j, const std::filesystem::path& base = {});

/// Experiment block: distribution, risk | utility, position, options,
/// strategies, n_grid, replications, seed, epsilons, tol, threads.
ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base = {});
Json to_json(const ExperimentConfig& config);

/// Throws SchemaError if `j` has keys outside `allowed`.
void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                  const std::string& context);

/// Reads and parses a JSON file; IoError / ParseError on failure.
Json read_json(const std::filesystem::path& path);

/// %.17g, the CLI's stdout and JSON scalar format.
std::string format_real(double v);
/// Indented JSON text with floats in format_real, non-finite floats as null.
std::string dump(const Json& j);

/// %.12g, the CSV format.
std::string format_csv_real(double v);

}  // namespace riskrates::io
