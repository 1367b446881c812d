#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "riskrates/config.hpp"
#include "riskrates/errors.hpp"

using namespace riskrates;
using io::Json;

TEST_CASE("risk spec JSON round trip") {
  const std::vector<Json> specs = {
      Json::parse(R"({"kind":"avar","u":0.95})"),
      Json::parse(R"({"kind":"oce","loss":{"name":"power","p":2}})"),
      Json::parse(R"({"kind":"oce","loss":{"name":"avar-loss","u":0.5}})"),
      Json::parse(R"({"kind":"sf","loss":{"name":"exp"}})"),
      Json::parse(R"({"kind":"oce","loss":{"name":"linear-above","slope":2}})"),
      Json::parse(R"({"kind":"spectral","components":[{"levels":[{"u":0,"mass":0.5},{"u":0.9,"mass":0.5}],"penalty":0.1}]})"),
      Json::parse(R"({"kind":"sharpness","eps":0.5})"),
  };
  for (const auto& j : specs) {
    CAPTURE(j.dump());
    const RiskSpec spec = io::risk_from_json(j);
    CHECK(io::to_json(io::risk_from_json(io::to_json(spec))) == io::to_json(spec));
  }
}

TEST_CASE("risk spec JSON rejects bad input") {
  CHECK_THROWS_AS(io::risk_from_json(Json::parse(R"({"kind":"avar","u":0.5,"typo":1})")), SchemaError);
  CHECK_THROWS_AS(io::risk_from_json(Json::parse(R"({"kind":"avar"})")), SchemaError);
  CHECK_THROWS_AS(io::risk_from_json(Json::parse(R"({"kind":"var","u":0.5})")), SchemaError);
  CHECK_THROWS_AS(io::risk_from_json(Json::parse(R"({"kind":"oce","loss":{"name":"table","x":[1]}})")),
                  SchemaError);
  CHECK_THROWS_AS(io::risk_from_json(Json::parse(R"({"kind":"avar","u":1.5})")), DomainError);
  CHECK_THROWS_AS(io::risk_from_json(Json::parse(R"({"kind":"sf","loss":{"name":"power","p":2}})")),
                  ContractError);
}

TEST_CASE("strategy set JSON") {
  const auto box = io::strategies_from_json(Json::parse(R"({"kind":"box","lo":[-1],"hi":[1]})"));
  CHECK(std::get<Box>(box).hi == std::vector<double>{1.0});
  CHECK(std::get<Simplex>(io::strategies_from_json(Json::parse(R"({"kind":"simplex","e":3})"))).e == 3);
  CHECK(std::get<Singleton>(io::strategies_from_json(Json::parse(R"({"kind":"singleton","g":[0,1]})"))).g.size() == 2);
  CHECK(io::to_json(box) == Json::parse(R"({"kind":"box","lo":[-1.0],"hi":[1.0]})"));
  CHECK_THROWS_AS(io::strategies_from_json(Json::parse(R"({"kind":"box","lo":[1],"hi":[-1]})")), ParameterError);
  CHECK_THROWS_AS(io::strategies_from_json(Json::parse(R"({"kind":"ball","r":1})")), SchemaError);
}

TEST_CASE("scenario CSV round trip") {
  const ScenarioSet s({0.25, 0.75}, {1.0, -0.1}, {0.5, 2.0, -1.0, 1.0 / 3.0}, 2);
  const auto path = std::filesystem::temp_directory_path() / "riskrates_scen.csv";
  io::save_scenarios(s, path);
  const ScenarioSet back = io::load_scenarios(path);
  CHECK(back.weights() == s.weights());
  CHECK(back.f() == s.f());
  CHECK(back.g() == s.g());
  CHECK(back.options() == 2);

  std::ofstream(path) << "weight,f,g1,extra\n1,0,0,0\n";
  CHECK_THROWS_AS(io::load_scenarios(path), SchemaError);
  std::ofstream(path) << "weight,f\n0.5,1\n0.4,2\n";
  CHECK_THROWS_AS(io::load_scenarios(path), ParameterError);
}

TEST_CASE("experiment config JSON") {
  const Json j = Json::parse(R"({
    "distribution": {"kind": "bernoulli", "p": 0.3},
    "risk": {"kind": "oce", "loss": {"name": "linear-above", "slope": 2}},
    "options": ["centered"],
    "strategies": {"kind": "box", "lo": [-1], "hi": [1]},
    "n_grid": [128, 256, 512],
    "replications": 100,
    "seed": "0x5EED",
    "epsilons": [0.05]
  })");
  const auto c = io::experiment_from_json(j);
  CHECK(c.seed == 0x5EED);
  CHECK(c.options.size() == 1);
  CHECK(c.n_grid == std::vector<std::size_t>{128, 256, 512});

  Json both = j;
  both["utility"] = Json::parse(R"({"kind":"exp"})");
  CHECK_THROWS_AS(io::experiment_from_json(both), SchemaError);
  Json unknown = j;
  unknown["replication"] = 5;
  CHECK_THROWS_AS(io::experiment_from_json(unknown), SchemaError);
}

TEST_CASE("distribution JSON reads CSV samples relative to the config") {
  const auto dir = std::filesystem::temp_directory_path() / "riskrates_cfg";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "one.csv") << "x\n3\n";
  const auto d = io::distribution_from_json(Json::parse(R"({"kind":"csv","path":"one.csv","column":"x"})"), dir);
  CHECK(std::get<FiniteDiscrete>(d).atoms() == std::vector<double>{3.0});
}

TEST_CASE("number formatting") {
  CHECK(io::format_real(0.1) == "0.10000000000000001");
  CHECK(io::format_csv_real(0.1) == "0.1");
}
