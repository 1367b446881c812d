#include "riskrates/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "riskrates/csv.hpp"
#include "riskrates/errors.hpp"

namespace riskrates::io {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) throw SchemaError(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(ctx + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = field(j, key, ctx);
  if (!v.is_number()) throw SchemaError(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& ctx) {
  return j.contains(key) ? number(j, key, ctx) : fallback;
}

std::string string_field(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = field(j, key, ctx);
  if (!v.is_string()) throw SchemaError(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> real_list(const Json& v, const std::string& ctx) {
  if (!v.is_array()) throw SchemaError(ctx + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw SchemaError(ctx + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::size_t count_field(const Json& v, const std::string& ctx) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw SchemaError(ctx + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::uint64_t seed_value(const Json& v, const std::string& ctx) {
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))
    return v.get<std::uint64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const std::uint64_t out = std::stoull(s, &used, 0);
      if (used == s.size()) return out;
    } catch (const std::exception&) {
    }
  }
  throw SchemaError(ctx + ": seed must be an unsigned integer or a numeric string");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  if (!j.is_object()) throw SchemaError(context + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(context + ": unknown field '" + key + "'");
  }
}

LossFunction loss_from_json(const Json& j) {
  const std::string ctx = "loss";
  const std::string name = string_field(j, "name", ctx);
  if (name == "avar-loss") {
    require_keys(j, {"name", "u"}, ctx);
    return LossFunction::avar_loss(number(j, "u", ctx));
  }
  if (name == "exp") {
    require_keys(j, {"name"}, ctx);
    return LossFunction::exponential();
  }
  if (name == "power") {
    require_keys(j, {"name", "p"}, ctx);
    return LossFunction::power(number(j, "p", ctx));
  }
  if (name == "linear-above") {
    require_keys(j, {"name", "slope"}, ctx);
    return LossFunction::linear_above(number(j, "slope", ctx));
  }
  throw SchemaError("loss: unsupported loss '" + name + "'");
}

Json to_json(const LossFunction& loss) {
  switch (loss.kind()) {
    case LossFunction::Kind::AvarLoss:
      return {{"name", "avar-loss"}, {"u", loss.parameter()}};
    case LossFunction::Kind::Exponential:
      return {{"name", "exp"}};
    case LossFunction::Kind::Power:
      return {{"name", "power"}, {"p", loss.parameter()}};
    case LossFunction::Kind::LinearAbove:
      return {{"name", "linear-above"}, {"slope", loss.parameter()}};
  }
  return {};
}

RiskSpec risk_from_json(const Json& j) {
  const std::string ctx = "risk";
  const std::string kind = string_field(j, "kind", ctx);
  RiskSpec spec;
  if (kind == "avar") {
    require_keys(j, {"kind", "u"}, ctx);
    spec = AvarSpec{number(j, "u", ctx)};
  } else if (kind == "oce") {
    require_keys(j, {"kind", "loss"}, ctx);
    spec = OceSpec{loss_from_json(field(j, "loss", ctx))};
  } else if (kind == "sf") {
    require_keys(j, {"kind", "loss"}, ctx);
    spec = ShortfallSpec{loss_from_json(field(j, "loss", ctx))};
  } else if (kind == "spectral") {
    require_keys(j, {"kind", "components"}, ctx);
    SpectralFamily family;
    const Json& comps = field(j, "components", ctx);
    if (!comps.is_array()) throw SchemaError("risk: components must be an array");
    for (const auto& c : comps) {
      const std::string cctx = "spectral component";
      require_keys(c, {"levels", "penalty"}, cctx);
      SpectralComponent comp;
      comp.penalty = number_or(c, "penalty", 0.0, cctx);
      const Json& levels = field(c, "levels", cctx);
      if (!levels.is_array()) throw SchemaError(cctx + ": levels must be an array");
      for (const auto& l : levels) {
        require_keys(l, {"u", "mass"}, "spectral level");
        comp.levels.emplace_back(number(l, "u", "spectral level"),
                                 number(l, "mass", "spectral level"));
      }
      family.components.push_back(std::move(comp));
    }
    spec = std::move(family);
  } else if (kind == "sharpness") {
    require_keys(j, {"kind", "eps"}, ctx);
    spec = SharpnessSpec{number(j, "eps", ctx)};
  } else {
    throw SchemaError("risk: unknown kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

Json to_json(const RiskSpec& spec) {
  return std::visit(overloaded{
                        [](const AvarSpec& s) -> Json { return {{"kind", "avar"}, {"u", s.u}}; },
                        [](const OceSpec& s) -> Json {
                          return {{"kind", "oce"}, {"loss", to_json(s.loss)}};
                        },
                        [](const ShortfallSpec& s) -> Json {
                          return {{"kind", "sf"}, {"loss", to_json(s.loss)}};
                        },
                        [](const SpectralFamily& f) -> Json {
                          Json comps = Json::array();
                          for (const auto& c : f.components) {
                            Json levels = Json::array();
                            for (const auto& [u, w] : c.levels)
                              levels.push_back({{"u", u}, {"mass", w}});
                            comps.push_back({{"levels", levels}, {"penalty", c.penalty}});
                          }
                          return {{"kind", "spectral"}, {"components", comps}};
                        },
                        [](const SharpnessSpec& s) -> Json {
                          return {{"kind", "sharpness"}, {"eps", s.eps}};
                        },
                    },
                    spec);
}

StrategySet strategies_from_json(const Json& j) {
  const std::string ctx = "strategies";
  const std::string kind = string_field(j, "kind", ctx);
  StrategySet set;
  if (kind == "singleton") {
    require_keys(j, {"kind", "g"}, ctx);
    set = Singleton{real_list(field(j, "g", ctx), ctx + ".g")};
  } else if (kind == "box") {
    require_keys(j, {"kind", "lo", "hi"}, ctx);
    set = Box{real_list(field(j, "lo", ctx), ctx + ".lo"), real_list(field(j, "hi", ctx), ctx + ".hi")};
  } else if (kind == "simplex") {
    require_keys(j, {"kind", "e"}, ctx);
    set = Simplex{count_field(field(j, "e", ctx), ctx + ".e")};
  } else {
    throw SchemaError("strategies: unknown kind '" + kind + "'");
  }
  validate(set);
  return set;
}

Json to_json(const StrategySet& set) {
  return std::visit(overloaded{
                        [](const Singleton& s) -> Json { return {{"kind", "singleton"}, {"g", s.g}}; },
                        [](const Box& b) -> Json {
                          return {{"kind", "box"}, {"lo", b.lo}, {"hi", b.hi}};
                        },
                        [](const Simplex& s) -> Json { return {{"kind", "simplex"}, {"e", s.e}}; },
                    },
                    set);
}

Distribution distribution_from_json(const Json& j, const std::filesystem::path& base) {
  const std::string ctx = "distribution";
  const std::string kind = string_field(j, "kind", ctx);
  Distribution dist;
  if (kind == "bernoulli") {
    require_keys(j, {"kind", "p"}, ctx);
    dist = Bernoulli{number(j, "p", ctx)};
  } else if (kind == "pareto") {
    require_keys(j, {"kind", "q"}, ctx);
    dist = ParetoTail{number(j, "q", ctx)};
  } else if (kind == "discrete") {
    require_keys(j, {"kind", "atoms", "weights"}, ctx);
    dist = FiniteDiscrete(real_list(field(j, "atoms", ctx), ctx + ".atoms"),
                          real_list(field(j, "weights", ctx), ctx + ".weights"));
  } else if (kind == "csv") {
    require_keys(j, {"kind", "path", "column"}, ctx);
    ColumnRef column = std::size_t{0};
    if (j.contains("column")) {
      const Json& c = j.at("column");
      if (c.is_string()) column = c.get<std::string>();
      else column = count_field(c, ctx + ".column");
    }
    dist = empirical(load_samples(resolve(base, string_field(j, "path", ctx)), column));
  } else {
    throw SchemaError("distribution: unknown kind '" + kind + "'");
  }
  validate(dist);
  return dist;
}

Utility utility_from_json(const Json& j) {
  const std::string ctx = "utility";
  const std::string kind = string_field(j, "kind", ctx);
  if (kind == "identity") {
    require_keys(j, {"kind"}, ctx);
    return Utility::identity();
  }
  if (kind == "exp") {
    require_keys(j, {"kind", "a"}, ctx);
    return Utility::exponential(number_or(j, "a", 1.0, ctx));
  }
  throw SchemaError("utility: unknown kind '" + kind + "'");
}

PayoffTransform payoff_from_json(const Json& j) {
  const std::string ctx = "payoff";
  PayoffTransform t;
  const std::string kind = j.is_string() ? j.get<std::string>() : string_field(j, "kind", ctx);
  if (kind == "identity" || kind == "centered") {
    if (!j.is_string()) require_keys(j, {"kind"}, ctx);
    t.kind = kind == "identity" ? PayoffTransform::Kind::Identity : PayoffTransform::Kind::Centered;
    return t;
  }
  if (kind == "call" || kind == "put") {
    if (j.is_string()) throw SchemaError("payoff: " + kind + " needs a strike");
    require_keys(j, {"kind", "strike", "price"}, ctx);
    t.kind = kind == "call" ? PayoffTransform::Kind::Call : PayoffTransform::Kind::Put;
    t.strike = number(j, "strike", ctx);
    t.price = number_or(j, "price", 0.0, ctx);
    return t;
  }
  throw SchemaError("payoff: unknown kind '" + kind + "'");
}

Json to_json(const PayoffTransform& t) {
  switch (t.kind) {
    case PayoffTransform::Kind::Identity:
      return "identity";
    case PayoffTransform::Kind::Centered:
      return "centered";
    case PayoffTransform::Kind::Call:
      return {{"kind", "call"}, {"strike", t.strike}, {"price", t.price}};
    case PayoffTransform::Kind::Put:
      return {{"kind", "put"}, {"strike", t.strike}, {"price", t.price}};
  }
  return {};
}

ScenarioSet load_scenarios(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  const std::size_t wcol = table.column("weight");
  const std::size_t fcol = table.column("f");
  std::vector<std::size_t> gcols;
  for (std::size_t j = 1;; ++j) {
    const std::string name = "g" + std::to_string(j);
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) break;
    gcols.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  if (table.header.size() != 2 + gcols.size())
    throw SchemaError("scenario CSV must have exactly the columns weight, f, g1..ge");
  std::vector<double> w;
  std::vector<double> f;
  std::vector<double> g;
  for (const auto& row : table.rows) {
    if (row.cells.size() != table.header.size())
      throw ParseError("wrong number of cells at line " + std::to_string(row.line));
    w.push_back(csv::parse_real(row.cells[wcol], row.line));
    f.push_back(csv::parse_real(row.cells[fcol], row.line));
    for (std::size_t c : gcols) g.push_back(csv::parse_real(row.cells[c], row.line));
  }
  return ScenarioSet(std::move(w), std::move(f), std::move(g), gcols.size());
}

void save_scenarios(const ScenarioSet& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "weight,f";
  for (std::size_t j = 0; j < s.options(); ++j) out << ",g" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_real(s.weights()[i]) << "," << format_real(s.f()[i]);
    for (std::size_t j = 0; j < s.options(); ++j) out << "," << format_real(s.g(i, j));
    out << "\n";
  }
}

ScenarioSet scenarios_from_json(const Json& j, const std::filesystem::path& base) {
  const std::string ctx = "scenarios";
  if (j.is_object() && j.contains("csv")) {
    require_keys(j, {"csv"}, ctx);
    return load_scenarios(resolve(base, string_field(j, "csv", ctx)));
  }
  require_keys(j, {"weights", "f", "g"}, ctx);
  std::vector<double> w = real_list(field(j, "weights", ctx), ctx + ".weights");
  std::vector<double> f = real_list(field(j, "f", ctx), ctx + ".f");
  std::vector<double> g;
  std::size_t e = 0;
  if (j.contains("g")) {
    const Json& rows = j.at("g");
    if (!rows.is_array() || rows.size() != w.size())
      throw SchemaError("scenarios.g must have one row per scenario");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto row = real_list(rows[i], ctx + ".g");
      if (i == 0) e = row.size();
      if (row.size() != e) throw SchemaError("scenarios.g rows differ in length");
      g.insert(g.end(), row.begin(), row.end());
    }
  }
  return ScenarioSet(std::move(w), std::move(f), std::move(g), e);
}

ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base) {
  const std::string ctx = "experiment";
  require_keys(j,
               {"distribution", "risk", "utility", "position", "options", "strategies", "n_grid",
                "replications", "seed", "epsilons", "tol", "threads"},
               ctx);
  ExperimentConfig c;
  c.dist = distribution_from_json(field(j, "distribution", ctx), base);
  if (j.contains("risk") == j.contains("utility"))
    throw SchemaError("experiment: exactly one of 'risk' and 'utility' is required");
  if (j.contains("risk")) c.objective = risk_from_json(j.at("risk"));
  else c.objective = utility_from_json(j.at("utility"));
  if (j.contains("position")) c.position = payoff_from_json(j.at("position"));
  if (j.contains("options")) {
    if (!j.at("options").is_array()) throw SchemaError("experiment: options must be an array");
    for (const auto& o : j.at("options")) c.options.push_back(payoff_from_json(o));
  }
  c.strategies = j.contains("strategies") ? strategies_from_json(j.at("strategies"))
                                          : StrategySet{Singleton{std::vector<double>(c.options.size(), 0.0)}};
  if (j.contains("n_grid")) {
    if (!j.at("n_grid").is_array()) throw SchemaError("experiment: n_grid must be an array");
    for (const auto& n : j.at("n_grid")) c.n_grid.push_back(count_field(n, ctx + ".n_grid"));
  }
  if (j.contains("replications")) c.replications = count_field(j.at("replications"), ctx + ".replications");
  if (j.contains("seed")) c.seed = seed_value(j.at("seed"), ctx + ".seed");
  if (j.contains("epsilons")) c.epsilons = real_list(j.at("epsilons"), ctx + ".epsilons");
  c.tol = number_or(j, "tol", c.tol, ctx);
  if (j.contains("threads")) c.threads = static_cast<unsigned>(count_field(j.at("threads"), ctx + ".threads"));
  validate(c);
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["distribution"] = describe(c.dist);
  if (const auto* r = std::get_if<RiskSpec>(&c.objective)) j["risk"] = to_json(*r);
  else j["utility"] = std::get<Utility>(c.objective).name;
  j["position"] = to_json(c.position);
  j["options"] = Json::array();
  for (const auto& o : c.options) j["options"].push_back(to_json(o));
  j["strategies"] = to_json(c.strategies);
  j["n_grid"] = c.n_grid;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["epsilons"] = c.epsilons;
  j["tol"] = c.tol;
  return j;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

void dump_into(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_real(v) : "null";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        dump_into(value, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        dump_into(j[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  out += "\n";
  return out;
}

}  // namespace riskrates::io
