#include "doctest.h"
#include "pdcqed/config.hpp"
#include "pdcqed/errors.hpp"
#include "pdcqed/presets.hpp"
#include "pdcqed/scenarios.hpp"

#include <filesystem>
#include <fstream>

using namespace pdc;
using json = nlohmann::json;

namespace {

std::string error_of(const json& j) {
  try {
    document_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("every preset parses and validates") {
  const auto presets = list_presets();
  CHECK(presets.size() >= 15);
  for (const auto& p : presets) {
    CAPTURE(p.name);
    const auto doc = load_document(p.name);
    CHECK(doc.type == p.type);
    if (doc.type == "sweep") {
      CHECK_NOTHROW(doc.sweep.validate());
      for (double v : doc.sweep.values) CHECK_NOTHROW(apply_sweep_value(doc.scenario, doc.sweep, v));
    }
    if (doc.type != "couplings") CHECK_NOTHROW(doc.scenario.validate());
  }
  CHECK_THROWS_AS(preset_json("no-such-preset"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
  json j = preset_json("degenerate");
  j["matter"]["V0_mev"] = 100;
  CHECK(error_of(j).find("matter.V0_mev") != std::string::npos);
  j = preset_json("degenerate");
  j["modes"][1]["omega"] = 1.0;
  CHECK(error_of(j).find("modes[1].omega") != std::string::npos);
  j = preset_json("degenerate");
  j["propagaton"] = json::object();
  CHECK(error_of(j).find("propagaton") != std::string::npos);
}

TEST_CASE("wrong types and bad values are config errors") {
  json j = preset_json("degenerate");
  j["matter"]["n_states"] = 12.5;
  CHECK(error_of(j).find("wrong type") != std::string::npos);
  j = preset_json("degenerate");
  j["kind"] = "tripartite";
  CHECK(!error_of(j).empty());
  j = preset_json("degenerate");
  j["modes"].push_back({{"label", 3}, {"n_max", 3}, {"lambda", 0.01}});
  CHECK(!error_of(j).empty());
  j = preset_json("degenerate");
  j["bath"] = preset_json("nondegenerate-bath")["bath"];
  CHECK(!error_of(j).empty());
  j = preset_json("nondegenerate-fock");
  j["drive"] = {{"kind", "current"}, {"amplitude", 1.0}, {"t0_ps", 0.1}, {"tau_ps", 0.04}};
  CHECK(!error_of(j).empty());
  j = preset_json("degenerate");
  j["modes"][0]["omega_meV"] = 1.4;
  CHECK(error_of(j).find("omega") != std::string::npos);
  j = preset_json("degenerate");
  j["method"] = "mean_field";
  j["initial"]["modes"]["1"] = {{"fock", 1}};
  CHECK(!error_of(j).empty());
  j = preset_json("degenerate");
  j["propagation"]["dt_fs"] = -1.0;
  CHECK(!error_of(j).empty());
}

TEST_CASE("sweep values must be non-empty and strictly monotone") {
  json s = preset_json("degenerate-theta-sweep");
  s["values"] = json::array();
  CHECK(!error_of(s).empty());
  s["values"] = {0, 30, 30};
  CHECK(!error_of(s).empty());
  s["values"] = {90, 60, 0};
  CHECK(error_of(s).empty());
  s["parameter"] = "omega";
  CHECK(!error_of(s).empty());
  s = preset_json("degenerate-theta-sweep");
  s["base"] = preset_json("degenerate");
  CHECK(!error_of(s).empty());  // both base and base_preset
}

TEST_CASE("scenario JSON round trip") {
  for (const char* name : {"degenerate", "nondegenerate-bath", "current-driven", "field-driven"}) {
    const auto c = document_from_json(preset_json(name)).scenario;
    const json back = scenario_to_json(c);
    const auto c2 = scenario_from_json(back);
    CHECK(scenario_to_json(c2) == back);
  }
}

TEST_CASE("resonance invariants") {
  std::vector<FockMode> m(3);
  for (int i = 0; i < 3; ++i) m[i].label = i + 1;
  m[0].omega = 1.0, m[1].omega = 0.3, m[2].omega = 0.7;
  CHECK_NOTHROW(check_resonance(ScenarioKind::kNondegenerateFock, m));
  m[2].omega = 0.71;
  CHECK_THROWS_AS(check_resonance(ScenarioKind::kNondegenerateFock, m), ConfigError);
  std::vector<FockMode> d(2);
  d[0].label = 1, d[1].label = 2;
  d[0].omega = 1.0, d[1].omega = 0.502;
  CHECK_NOTHROW(check_resonance(ScenarioKind::kDegenerate, d));
  d[1].omega = 0.51;
  CHECK_THROWS_AS(check_resonance(ScenarioKind::kDegenerate, d), ConfigError);
}

TEST_CASE("explicit frequencies that break energy conservation are refused before any solve") {
  json j = preset_json("nondegenerate-fock");
  j["modes"][0]["omega_meV"] = 24.65;
  j["modes"][1]["omega_meV"] = 1.36;
  j["modes"][2]["omega_meV"] = 25.0;
  auto c = document_from_json(j).scenario;
  MatterOperators none;
  CHECK_THROWS_AS(check_resonance(c.kind, resolve_modes(c, none)), ConfigError);
  j["modes"][2]["omega_meV"] = 23.29;
  c = document_from_json(j).scenario;
  CHECK_NOTHROW(check_resonance(c.kind, resolve_modes(c, none)));
}

TEST_CASE("memory estimate and budget") {
  auto c = document_from_json(preset_json("nondegenerate-bath70")).scenario;
  const auto m = estimate_memory(c);
  CHECK(m.dimension == 12u * 27u * 2556u);
  CHECK(m.total_mb > 4096.0);
  CHECK(memory_budget_mb(c) == 4096.0);
  c.memory_budget_mb = 1e9;
  CHECK(memory_budget_mb(c) == 1e9);
  auto small = document_from_json(preset_json("degenerate")).scenario;
  CHECK(estimate_memory(small).dimension == 12u * 30u * 30u);
  small.memory_budget_mb = 1.0;
  try {
    run_scenario(small, {false, {}});
    CHECK(false);
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("12 x 30 x 30") != std::string::npos);
  }
}

TEST_CASE("documents load from files with comments") {
  const auto path = (std::filesystem::temp_directory_path() / "pdc_cfg.json").string();
  {
    std::ofstream f(path);
    f << "// degenerate at weak coupling\n" << preset_json("degenerate").dump(2) << "\n";
  }
  const auto doc = load_document(path);
  CHECK(doc.type == "run");
  CHECK(doc.scenario.mode(1).lambda == 0.017);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_document("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("sweep value application") {
  const auto doc = load_document("degenerate-xi-sweep-few-level");
  const auto c = apply_sweep_value(doc.scenario, doc.sweep, 7.0);
  CHECK(c.initial.modes.at(1).coherent);
  CHECK(c.initial.modes.at(1).xi == cplx(7.0));
  CHECK(poisson_tail(49.0, c.mode(1).n_max) <= 1e-7);
  CHECK(poisson_tail(49.0, c.mode(1).n_max - 1) > 1e-7);
  const auto th = load_document("degenerate-theta-sweep");
  CHECK(apply_sweep_value(th.scenario, th.sweep, 45.0).theta1_deg == 45.0);
  const auto nd = load_document("nondegenerate-lambda-sweep");
  const auto l = apply_sweep_value(nd.scenario, nd.sweep, 0.026);
  for (const auto& m : l.modes) CHECK(m.lambda == 0.026);
  SweepSpec bad = th.sweep;
  CHECK_THROWS_AS(apply_sweep_value(nd.scenario, bad, 30.0), ConfigError);
}
