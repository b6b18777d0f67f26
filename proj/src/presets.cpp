#include "pdcqed/presets.hpp"

#include <functional>
#include <map>

#include "pdcqed/errors.hpp"

namespace pdc {

namespace {

using json = nlohmann::json;

json nondegenerate_fock() {
  return json::parse(R"({
    "name": "nondegenerate-fock",
    "kind": "nondegenerate_fock",
    "matter": {"V0_meV": 200, "n_states": 12},
    "modes": [
      {"label": 1, "n_max": 19, "lambda": 0.014},
      {"label": 2, "n_max": 19, "lambda": 0.014},
      {"label": 3, "n_max": 19, "lambda": 0.014}
    ],
    "angles_deg": {"theta2": 90, "theta3": 90},
    "initial": {"matter_state": 0, "modes": {"1": {"fock": 1}}},
    "propagation": {"t_end_ps": 40, "dt_fs": 2.0, "record_every_fs": 10, "krylov_dim": 40},
    "output": {"csv": "nondegenerate-fock.csv", "summary": "nondegenerate-fock.json"}
  })");
}

json nondegenerate_coherent() {
  json j = nondegenerate_fock();
  j["name"] = "nondegenerate-coherent";
  j["kind"] = "nondegenerate_coherent";
  for (auto& m : j["modes"]) m["n_max"] = 29;
  j["initial"] = json::parse(R"({"matter_state": 0, "modes": {"1": {"xi_re": 2.0}}})");
  j["output"] = {{"csv", "nondegenerate-coherent.csv"}, {"summary", "nondegenerate-coherent.json"}};
  return j;
}

// Three Fock states per main mode, as in the bath runs.
json nondegenerate_small() {
  json j = nondegenerate_fock();
  j["name"] = "nondegenerate-small";
  for (auto& m : j["modes"]) m["n_max"] = 2;
  j["propagation"] = {{"t_end_ps", 40}, {"dt_fs", 20.0}, {"record_every_fs", 20}, {"krylov_dim", 60}};
  j["output"] = {{"csv", "nondegenerate-small.csv"}, {"summary", "nondegenerate-small.json"}};
  return j;
}

json nondegenerate_bath() {
  json j = nondegenerate_small();
  j["name"] = "nondegenerate-bath";
  j["kind"] = "nondegenerate_bath";
  j["bath"] = json::parse(R"({
    "windows": [{"low_meV": 0.113, "high_meV": 4.521, "n_modes": 20, "parent": 2}],
    "lambda": 0.007, "sector": 2, "n_max_per_mode": 2
  })");
  j["output"] = {{"csv", "nondegenerate-bath.csv"}, {"summary", "nondegenerate-bath.json"}};
  return j;
}

json nondegenerate_bath70() {
  json j = nondegenerate_bath();
  j["name"] = "nondegenerate-bath70";
  j["bath"]["windows"].push_back({{"low_meV", 11.303}, {"high_meV", 27.128}, {"n_modes", 50}, {"parent", 3}});
  j["output"] = {{"csv", "nondegenerate-bath70.csv"}, {"summary", "nondegenerate-bath70.json"}};
  return j;
}

json current_driven() {
  return json::parse(R"({
    "name": "current-driven",
    "kind": "current_driven",
    "matter": {"V0_meV": 200, "n_states": 12},
    "modes": [
      {"label": 1, "n_max": 29, "lambda": 0.014},
      {"label": 2, "n_max": 9, "lambda": 0.014},
      {"label": 3, "n_max": 9, "lambda": 0.014}
    ],
    "angles_deg": {"theta2": 90, "theta3": 90},
    "initial": {"ground_state": true},
    "drive": {"kind": "current", "t0_ps": 0.115, "tau_ps": 0.04, "calibrate": true,
              "calibration_time_ps": 0.23, "calibration_target": 4.0},
    "propagation": {"t_end_ps": 40, "dt_fs": 1.0, "record_every_fs": 10, "krylov_dim": 40},
    "output": {"csv": "current-driven.csv", "summary": "current-driven.json"}
  })");
}

json field_driven() {
  json j = current_driven();
  j["name"] = "field-driven";
  j["kind"] = "field_driven";
  j["drive"]["kind"] = "field";
  j["output"] = {{"csv", "field-driven.csv"}, {"summary", "field-driven.json"}};
  return j;
}

json degenerate() {
  return json::parse(R"({
    "name": "degenerate",
    "kind": "degenerate",
    "matter": {"V0_meV": 200, "n_states": 12},
    "modes": [
      {"label": 1, "n_max": 29, "lambda": 0.017},
      {"label": 2, "n_max": 29, "lambda": 0.017}
    ],
    "angles_deg": {"theta1": 60},
    "initial": {"matter_state": 0, "modes": {"1": {"xi_re": 2.0}}},
    "propagation": {"t_end_ps": 40, "dt_fs": 5.0, "record_every_fs": 10, "krylov_dim": 40},
    "output": {"csv": "degenerate.csv", "summary": "degenerate.json"}
  })");
}

json sweep(const std::string& base, const std::string& parameter, json values, const std::string& out,
           json extra = json::object()) {
  json j = {{"type", "sweep"}, {"base_preset", base}, {"parameter", parameter}, {"values", values},
            {"output", out}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

json degenerate_with(const std::string& method, int n_max1) {
  json j = degenerate();
  j["method"] = method;
  j["modes"][0]["n_max"] = n_max1;
  return j;
}

struct Entry {
  std::string type;
  std::string description;
  std::function<json()> make;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r = {
      {"couplings",
       {"couplings", "effective couplings g = lambda/sqrt(2w) for the weak, strong and ultra-strong cavities",
        [] {
          return json{{"type", "couplings"},
                      {"cavity_lengths_um", {100, 50, 30}},
                      {"lambdas", {0.014, 0.020, 0.026}},
                      {"omegas_meV", {24.65, 1.36, 23.29}},
                      {"output", "couplings.csv"}};
        }}},
      {"nondegenerate-fock", {"run", "one photon in the pump mode, three modes, weak coupling", nondegenerate_fock}},
      {"nondegenerate-coherent", {"run", "coherent pump with four photons, three modes", nondegenerate_coherent}},
      {"nondegenerate-small", {"run", "bath-free reference with three Fock states per mode", nondegenerate_small}},
      {"nondegenerate-bath",
       {"run", "reduced bath: 20 modes around the signal frequency, two-photon sector", nondegenerate_bath}},
      {"nondegenerate-bath70",
       {"run", "full 70-mode bath (exceeds a desktop memory budget; expect a resource refusal)",
        nondegenerate_bath70}},
      {"current-driven", {"run", "pump mode excited by a calibrated classical current", current_driven}},
      {"field-driven", {"run", "pump mode replaced by the classical field of the same current", field_driven}},
      {"degenerate", {"run", "degenerate down-conversion, strong coupling, theta1 = 60 deg", degenerate}},
      {"degenerate-methods",
       {"compare", "full, three-level and mean-field dynamics of the degenerate preset",
        [] {
          return json{{"type", "compare"},
                      {"base_preset", "degenerate"},
                      {"methods", {"full", "few_level", "mean_field"}},
                      {"output", {{"csv", "degenerate-methods.csv"}, {"summary", "degenerate-methods.json"}}}};
        }}},
      {"degenerate-theta-sweep",
       {"sweep", "mixing angle theta1 in {0, 30, 45, 60, 90} deg",
        [] { return sweep("degenerate", "theta1", {0, 30, 45, 60, 90}, "degenerate-theta-sweep.csv"); }}},
      {"degenerate-v0-sweep",
       {"sweep", "ring anharmonicity V0 in {0, ..., 300} meV with resonant pump",
        [] {
          json base = degenerate();
          base["matter"]["level_cut"] = "truncate";
          return json{{"type", "sweep"},
                      {"base", base},
                      {"parameter", "V0"},
                      {"values", {0, 50, 100, 150, 200, 250, 300}},
                      {"output", "degenerate-v0-sweep.csv"}};
        }}},
      {"degenerate-xi-sweep",
       {"sweep", "pump amplitude xi1 in {1, 2, 3, 4}, full method",
        [] { return sweep("degenerate", "xi1", {1, 2, 3, 4}, "degenerate-xi-sweep.csv"); }}},
      {"degenerate-xi-sweep-few-level",
       {"sweep", "pump amplitude xi1 in {1, ..., 10}, three-level approximation",
        [] {
          return json{{"type", "sweep"},
                      {"base", degenerate_with("few_level", 29)},
                      {"parameter", "xi1"},
                      {"values", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
                      {"output", "degenerate-xi-sweep-few-level.csv"}};
        }}},
      {"degenerate-xi-sweep-mean-field",
       {"sweep", "pump amplitude xi1 in {1, ..., 10}, mean field",
        [] {
          return json{{"type", "sweep"},
                      {"base", degenerate_with("mean_field", 29)},
                      {"parameter", "xi1"},
                      {"values", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
                      {"output", "degenerate-xi-sweep-mean-field.csv"}};
        }}},
      {"degenerate-lambda-sweep",
       {"sweep", "coupling lambda in {0.014, ..., 0.044} at xi1 = 2",
        [] {
          return sweep("degenerate", "lambda", {0.014, 0.017, 0.019, 0.026, 0.044}, "degenerate-lambda-sweep.csv");
        }}},
      {"nondegenerate-lambda-sweep",
       {"sweep", "single-photon pump at lambda in {0.014, 0.020, 0.026}",
        [] {
          return sweep("nondegenerate-fock", "lambda", {0.014, 0.020, 0.026}, "nondegenerate-lambda-sweep.csv");
        }}},
  };
  return r;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& [name, e] : registry()) out.push_back({name, e.type, e.description});
  return out;
}

bool has_preset(const std::string& name) { return registry().count(name) > 0; }

nlohmann::json preset_json(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second.make();
}

}  // namespace pdc
