#pragma once

// End-to-end scenario pipeline: matter solve, basis, Hamiltonian, initial
// state, propagation, observables and summaries; plus sweeps and method
// comparisons on top of it.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pdcqed/config.hpp"
#include "pdcqed/drive.hpp"
#include "pdcqed/matter.hpp"
#include "pdcqed/observables.hpp"
#include "pdcqed/units.hpp"

namespace pdc {

UnitSystem scenario_units(const ScenarioConfig& cfg);

// Solved matter, shared between runs in this process and optionally cached on
// disk (matter.cache_dir, else $PDC_MATTER_CACHE).
std::shared_ptr<const MatterModel> obtain_matter(const ScenarioConfig& cfg);
void clear_matter_cache();

// Mode table in effective units with polarizations from the geometry. Missing
// frequencies are made resonant with the matter spectrum:
//   non-degenerate: w1 = E(level 7) - E(level 1), w3 = E(level 6) - E(level 1), w2 = w1 - w3
//   degenerate:     w1 = E(level 2) - E(level 1), w2 = w1 / 2
std::vector<FockMode> resolve_modes(const ScenarioConfig& cfg, const MatterOperators& matter);
// Energy conservation between pump and signal modes within 0.5 %.
void check_resonance(ScenarioKind kind, const std::vector<FockMode>& modes, double rel_tol = 5e-3);

struct MemoryEstimate {
  std::size_t matter_dim = 0;
  std::size_t photon_dim = 0;
  std::size_t bath_dim = 1;
  std::size_t dimension = 0;
  double nnz_per_row = 0.0;
  double total_mb = 0.0;
  std::string shape;
};
MemoryEstimate estimate_memory(const ScenarioConfig& cfg);
// Config value, else $PDC_MEMORY_BUDGET_MB, else 4096.
double memory_budget_mb(const ScenarioConfig& cfg);

DriveSpec drive_from_config(const ScenarioConfig& cfg, const FockMode& mode1);
DriveCalibration calibrate_from_config(const ScenarioConfig& cfg);

struct RunOptions {
  bool write_outputs = true;
  std::function<void(const std::string&)> log;
};

struct ScenarioResult {
  ObservableSeries series;
  nlohmann::json summary;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

// Derived quantities of a run used by sweeps and the acceptance checks.
struct RunMetrics {
  double n2_max = 0.0;
  double t_n2_max_ps = 0.0;
  double q2_min = 0.0;
  double q2_min_raw = 0.0;
  double t_q2_min_ps = 0.0;
  double first_peak_ps = 0.0;
  std::optional<double> eta;
};
RunMetrics run_metrics(const ObservableSeries& s, const ScenarioConfig& cfg);

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const SweepSpec& sweep, double value);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  RunMetrics metrics;
  double runtime_s = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const ScenarioConfig& base, const RunOptions& opt = {});

struct CompareResult {
  std::vector<ScenarioResult> runs;
  nlohmann::json summary;
};

CompareResult compare_methods(const ScenarioConfig& base, const std::vector<Method>& methods,
                              const RunOptions& opt = {});

struct CouplingRow {
  std::optional<double> cavity_length_um;
  double lambda = 0.0;  // used for g
  std::optional<double> lambda_tabulated;
  std::vector<double> g;
  std::vector<double> products;  // g1 g2, g1 g3, g2 g3, ...
};
std::vector<CouplingRow> coupling_table(const CouplingTableSpec& spec, const UnitSystem& u = default_units());

}  // namespace pdc
