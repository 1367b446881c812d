#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riskrates/config.hpp"
#include "riskrates/errors.hpp"
#include "riskrates/experiments.hpp"
#include "riskrates/hedge.hpp"
#include "riskrates/oracle.hpp"
#include "riskrates/risk.hpp"

namespace fs = std::filesystem;
using namespace riskrates;
using io::Json;

namespace {

constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct Manifest {
  std::string command;
  fs::path config_path;
  std::optional<std::string> seed_flag;
  fs::path output_dir = ".";
  unsigned threads = 0;  // 0: take the config value
  std::vector<std::string> oracle_args;
};

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParameterError(source + ": '" + text + "' is not an unsigned 64-bit seed");
  }
}

/// Flag, then RISKRATES_SEED, then the config's own seed, then 0x5EED.
std::uint64_t resolve_seed(const Manifest& m, std::optional<std::uint64_t> from_config) {
  if (m.seed_flag) return parse_seed(*m.seed_flag, "--seed");
  if (const char* env = std::getenv("RISKRATES_SEED"); env && *env)
    return parse_seed(env, "RISKRATES_SEED");
  return from_config.value_or(kDefaultSeed);
}

/// Reads the config, checks the schema version and strips it.
Json load_config(const Manifest& m) {
  if (m.config_path.empty()) throw ParameterError(m.command + " needs --config");
  Json j = io::read_json(m.config_path);
  if (!j.is_object()) throw SchemaError("config must be a JSON object");
  if (!j.contains("schema")) throw SchemaError("config is missing \"schema\"");
  if (j["schema"] != io::kSchemaVersion)
    throw SchemaError("unsupported schema version " + j["schema"].dump());
  j.erase("schema");
  return j;
}

fs::path base_of(const Manifest& m) { return m.config_path.parent_path(); }

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw SchemaError(ctx + ": missing \"" + key + "\"");
  return j.at(key);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

std::ofstream open_csv(const fs::path& path, const char* header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << header << "\n" << std::flush;
  return out;
}

void print_value(double v) { std::cout << io::format_real(v) << "\n"; }

Json fit_json(const RateCurve& curve) {
  try {
    const RateFit fit = fit_rate(curve);
    return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
  } catch (const ParameterError& e) {
    return {{"error", e.what()}};
  }
}

struct Experiment {
  ExperimentConfig config;
  Json echo;  // the config as given, with the seed actually used
};

Experiment experiment(const Manifest& m) {
  Json j = load_config(m);
  ExperimentConfig c = io::experiment_from_json(j, base_of(m));
  c.seed = resolve_seed(m, j.contains("seed") ? std::optional(c.seed) : std::nullopt);
  if (m.threads > 0) c.threads = m.threads;
  validate(c);
  j["seed"] = c.seed;
  j.erase("threads");
  return {std::move(c), std::move(j)};
}

Json summary(const Experiment& e, const TrueValue& truth) {
  return {{"config", e.echo},
          {"true_value", truth.value},
          {"true_value_approximate", truth.approximate}};
}

int cmd_estimate(const Manifest& m) {
  const Json j = load_config(m);
  io::require_keys(j, {"input", "risk", "tol"}, "estimate");
  const Distribution dist = io::distribution_from_json(field(j, "input", "estimate"), base_of(m));
  const RiskSpec risk = io::risk_from_json(field(j, "risk", "estimate"));
  const double tol = j.value("tol", 1e-10);
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");

  Json stats = Json::object();
  double value = 0.0;
  bool approximate = false;
  if (is_finite_support(dist)) {
    const FiniteDiscrete law = as_discrete(dist);
    if (const auto* o = std::get_if<OceSpec>(&risk)) {
      const OceResult r = oce(law, o->loss, tol);
      value = r.value;
      stats = {{"minimizer_m", r.minimizer_m}, {"bracket", {r.lo, r.hi}},
               {"iterations", r.iterations}};
    } else {
      value = evaluate(law, risk, tol);
    }
  } else {
    ExperimentConfig c;
    c.dist = dist;
    c.objective = risk;
    c.tol = tol;
    c.seed = resolve_seed(m, std::nullopt);
    const TrueValue tv = true_value(c);
    value = tv.value;
    approximate = tv.approximate;
    if (approximate) stats = {{"reference_sample_size", kReferenceSampleSize}, {"seed", c.seed}};
  }
  print_value(value);
  const Json report = {{"risk_spec", io::to_json(risk)},
                       {"input", j.at("input")},
                       {"value", value},
                       {"approximate", approximate},
                       {"solver_stats", stats}};
  write_text(m.output_dir / "estimate.json", io::dump(report));
  return 0;
}

int cmd_hedge(const Manifest& m) {
  const Json j = load_config(m);
  io::require_keys(j, {"scenarios", "risk", "utility", "strategies", "tol"}, "hedge");
  const ScenarioSet s = io::scenarios_from_json(field(j, "scenarios", "hedge"), base_of(m));
  const StrategySet set = j.contains("strategies")
                              ? io::strategies_from_json(j.at("strategies"))
                              : StrategySet{Singleton{std::vector<double>(s.options(), 0.0)}};
  const double tol = j.value("tol", 1e-9);
  if (j.contains("risk") == j.contains("utility"))
    throw SchemaError("hedge: give exactly one of \"risk\" and \"utility\"");

  HedgeResult r;
  Json report;
  if (j.contains("risk")) {
    const RiskSpec risk = io::risk_from_json(j.at("risk"));
    r = hedged_risk(s, risk, set, tol);
    report["risk_spec"] = io::to_json(risk);
  } else {
    r = utility_max(s, io::utility_from_json(j.at("utility")), set, tol);
    report["utility"] = j.at("utility");
  }
  print_value(r.value);
  report["scenarios"] = {{"size", s.size()}, {"options", s.options()}};
  report["strategies"] = io::to_json(set);
  report["value"] = r.value;
  report["g_star"] = r.g_star;
  report["solver_stats"] = {{"restarts_used", r.restarts_used},
                            {"inner_iterations", r.inner_iterations},
                            {"certified", r.certified}};
  write_text(m.output_dir / "hedge.json", io::dump(report));
  return 0;
}

int cmd_rate(const Manifest& m) {
  const Experiment e = experiment(m);
  const ExperimentConfig& c = e.config;
  auto csv = open_csv(m.output_dir / "rate.csv", "N,mean_error,std_error");
  const Simulation sim = simulate(c, [&](const Simulation& partial) {
    const RatePoint p = rate_curve(partial).points.back();
    csv << p.n << "," << io::format_csv_real(p.mean_error) << ","
        << io::format_csv_real(p.std_error) << "\n"
        << std::flush;
  });
  const RateCurve curve = rate_curve(sim);
  Json out = summary(e, sim.truth);
  const RateFit fit = fit_rate(curve);
  out["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
  write_text(m.output_dir / "rate.json", io::dump(out));
  std::cout << "slope " << io::format_real(fit.slope) << " r_squared "
            << io::format_real(fit.r_squared) << "\n";
  return 0;
}

int cmd_deviation(const Manifest& m) {
  const Experiment e = experiment(m);
  const ExperimentConfig& c = e.config;
  if (c.epsilons.empty()) throw ParameterError("deviation needs a non-empty \"epsilons\"");
  auto csv = open_csv(m.output_dir / "deviation.csv", "N,epsilon,p_hat,R");
  const Simulation sim = simulate(c, [&](const Simulation& partial) {
    Simulation last;
    last.n_grid = {partial.n_grid.back()};
    last.signed_errors = {partial.signed_errors.back()};
    for (const auto& p : deviation_curve(last, c.epsilons).points)
      csv << p.n << "," << io::format_csv_real(p.epsilon) << "," << io::format_csv_real(p.p_hat)
          << "," << p.replications << "\n";
    csv << std::flush;
  });
  write_text(m.output_dir / "deviation.json", io::dump(summary(e, sim.truth)));
  return 0;
}

int cmd_bias(const Manifest& m) {
  const Experiment e = experiment(m);
  const ExperimentConfig& c = e.config;
  if (c.replications < 100) throw ParameterError("bias needs >= 100 replications");
  auto csv = open_csv(m.output_dir / "bias.csv", "N,mean_signed_error,std_error");
  const Simulation sim = simulate(c, [&](const Simulation& partial) {
    const BiasReport b = bias_reports(partial).back();
    csv << b.n << "," << io::format_csv_real(b.mean_signed_error) << ","
        << io::format_csv_real(b.std_error) << "\n"
        << std::flush;
  });
  write_text(m.output_dir / "bias.json", io::dump(summary(e, sim.truth)));
  return 0;
}

int cmd_sharpness(const Manifest& m) {
  const Json j = load_config(m);
  io::require_keys(j, {"eps", "n_grid", "replications", "seed", "threads"}, "sharpness");
  const double eps = field(j, "eps", "sharpness").get<double>();
  const auto grid = field(j, "n_grid", "sharpness").get<std::vector<std::size_t>>();
  const std::size_t reps = j.value("replications", std::size_t{100});
  std::optional<std::uint64_t> config_seed;
  if (j.contains("seed"))
    config_seed = j["seed"].is_string() ? parse_seed(j["seed"].get<std::string>(), "seed")
                                        : j["seed"].get<std::uint64_t>();
  const std::uint64_t seed = resolve_seed(m, config_seed);
  const unsigned threads = m.threads > 0 ? m.threads : j.value("threads", 1u);

  const RateCurve curve = sharpness_curve(eps, grid, reps, seed, threads);
  auto csv = open_csv(m.output_dir / "sharpness.csv", "N,mean_error,std_error");
  for (const auto& p : curve.points)
    csv << p.n << "," << io::format_csv_real(p.mean_error) << ","
        << io::format_csv_real(p.std_error) << "\n";
  csv << std::flush;
  const Json out = {{"config",
                     {{"eps", eps}, {"n_grid", grid}, {"replications", reps}, {"seed", seed}}},
                    {"fit", fit_json(curve)}};
  write_text(m.output_dir / "sharpness.json", io::dump(out));
  return 0;
}

int cmd_probe(const Manifest& m) {
  const Json j = load_config(m);
  io::require_keys(j, {"scenarios", "risk", "direction", "t_max", "steps", "tol"},
                   "probe-unbounded");
  const ScenarioSet s = io::scenarios_from_json(field(j, "scenarios", "probe"), base_of(m));
  const RiskSpec risk = io::risk_from_json(field(j, "risk", "probe"));
  const auto direction = field(j, "direction", "probe").get<std::vector<double>>();
  const ProbeReport r = unboundedness_probe(s, risk, direction, j.value("t_max", 1e4),
                                            j.value("steps", std::size_t{9}), j.value("tol", 1e-10));
  Json values = Json::array();
  for (const auto& [t, v] : r.values) values.push_back({{"t", t}, {"value", v}});
  const Json out = {{"risk_spec", io::to_json(risk)},
                    {"direction", direction},
                    {"values", values},
                    {"diverging", r.diverging}};
  write_text(m.output_dir / "probe.json", io::dump(out));
  std::cout << "diverging " << (r.diverging ? "true" : "false") << "\n";
  return 0;
}

int cmd_oracle(const Manifest& m) {
  const auto& a = m.oracle_args;
  if (a.empty()) throw ParameterError("oracle needs a function name");
  auto arg = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(a.at(i), &used);
      if (used != a[i].size()) throw std::invalid_argument(a[i]);
      return v;
    } catch (const std::exception&) {
      throw ParameterError("oracle argument " + std::to_string(i) + " is not a number");
    }
  };
  auto expect = [&](std::size_t n) {
    if (a.size() != n + 1)
      throw ParameterError("oracle " + a[0] + " takes " + std::to_string(n) + " arguments");
  };
  const std::string& name = a[0];
  double v = 0.0;
  if (name == "avar_bernoulli") {
    expect(2);
    v = oracle::avar_bernoulli(arg(1), arg(2));
  } else if (name == "avar_pareto") {
    expect(2);
    v = oracle::avar_pareto(arg(1), arg(2));
  } else if (name == "sharpness_two_point") {
    expect(2);
    v = oracle::sharpness_two_point(arg(1), arg(2));
  } else if (name == "dyadic_sum") {
    expect(3);
    v = oracle::dyadic_sum(arg(1), arg(2), arg(3));
  } else if (name == "binomial_tail") {
    expect(3);
    const double n = arg(1);
    if (!(n >= 1.0 && n == std::floor(n))) throw ParameterError("n must be a positive integer");
    v = oracle::binomial_two_sided_tail(static_cast<std::size_t>(n), arg(2), arg(3));
  } else {
    throw ParameterError("unknown oracle '" + name +
                         "' (avar_bernoulli, avar_pareto, sharpness_two_point, dyadic_sum, "
                         "binomial_tail)");
  }
  print_value(v);
  return 0;
}

int dispatch(const Manifest& m) {
  resolve_seed(m, std::nullopt);  // reject a malformed flag or environment seed up front
  if (m.command != "oracle") {
    std::error_code ec;
    fs::create_directories(m.output_dir, ec);
    if (ec || !fs::is_directory(m.output_dir))
      throw IoError("cannot create output directory " + m.output_dir.string());
  }
  if (m.command == "estimate") return cmd_estimate(m);
  if (m.command == "hedge") return cmd_hedge(m);
  if (m.command == "rate") return cmd_rate(m);
  if (m.command == "deviation") return cmd_deviation(m);
  if (m.command == "bias") return cmd_bias(m);
  if (m.command == "sharpness") return cmd_sharpness(m);
  if (m.command == "probe-unbounded") return cmd_probe(m);
  return cmd_oracle(m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plug-in estimation of (hedged) risk measures and their convergence rates"};
  app.require_subcommand(1);
  Manifest m;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"estimate", "Risk of a distribution or CSV sample"},
      {"hedge", "Hedged risk or utility on a scenario set"},
      {"rate", "Mean plug-in error across sample sizes"},
      {"deviation", "Exceedance probabilities of the plug-in error"},
      {"bias", "Mean signed plug-in error"},
      {"sharpness", "Sharpness risk error under Ber(1/N)"},
      {"probe-unbounded", "Risk along a ray of strategies"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", m.config_path, "JSON config")->required();
    sub->add_option("--seed", m.seed_flag, "Seed (decimal or 0x hex), overrides the config");
    sub->add_option("--out", m.output_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", m.threads, "Worker threads (results do not depend on it)");
    sub->callback([&m, name = name] { m.command = name; });
  }
  auto* orc = app.add_subcommand("oracle", "Closed-form reference values");
  orc->add_option("args", m.oracle_args, "NAME ARGS...")->required();
  orc->callback([&m] { m.command = "oracle"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return dispatch(m);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
