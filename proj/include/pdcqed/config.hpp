#pragma once

// Scenario configuration: a JSON tree with explicit units in the key names.
// Unknown keys are errors.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdcqed/drive.hpp"
#include "pdcqed/hamiltonian.hpp"
#include "pdcqed/matter.hpp"
#include "pdcqed/photon.hpp"

namespace pdc {

using json = nlohmann::json;

enum class ScenarioKind {
  kNondegenerateFock,
  kNondegenerateCoherent,
  kNondegenerateBath,
  kCurrentDriven,
  kFieldDriven,
  kDegenerate,
};

enum class Method { kFull, kFewLevel, kMeanField };

std::string to_string(ScenarioKind k);
std::string to_string(Method m);
ScenarioKind parse_kind(const std::string& s);
Method parse_method(const std::string& s);
bool is_degenerate(ScenarioKind k);

struct MatterConfig {
  double v0_meV = 200.0;
  double omega0_meV = 10.0;
  double d_nm = 10.0;
  int n_states = 12;
  int grid_points = 127;
  double dx_nm = 0.7052;
  int stencil_order = 8;
  LevelCut level_cut = LevelCut::kError;
  std::string cache_dir;  // empty disables the on-disk cache
};

struct ModeConfig {
  int label = 1;
  std::optional<double> omega_meV;  // absent: resonant with the matter spectrum
  int n_max = 29;
  double lambda = 0.0;
};

struct InitialModeConfig {
  int fock = 0;
  cplx xi = 0.0;
  bool coherent = false;
};

struct InitialConfig {
  bool ground_state = false;  // correlated ground state of the static Hamiltonian
  int matter_state = 0;
  std::map<int, InitialModeConfig> modes;  // absent modes start in vacuum
};

struct DriveConfig {
  DriveKind kind = DriveKind::kNone;
  double amplitude = 0.0;  // eff. units
  double t0_ps = 0.0;
  double tau_ps = 0.0;
  std::optional<double> omega_meV;  // default: mode 1
  double q0 = 0.0;
  double qdot0 = 0.0;
  bool calibrate = false;
  double calibration_time_ps = 0.0;
  double calibration_target = 4.0;
  double calibration_tol = 0.05;
};

struct PropagationSettings {
  double t_end_ps = 40.0;
  double dt_fs = 1.0;
  double record_every_fs = 10.0;
  int krylov_dim = 30;
  double krylov_tol = 1e-12;
  double meanfield_dt_fs = 0.25;
  int checkpoint_every = 0;
  std::string checkpoint_path;
};

struct AnalysisConfig {
  double t_from_ps = 0.0;
  double t_to_ps = 40.0;
  double peak_fraction = 0.5;
};

struct OutputConfig {
  std::string csv;
  std::string summary;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::kDegenerate;
  Method method = Method::kFull;
  std::vector<int> few_levels;  // empty: default for the kind
  double mass_eff = 0.067;
  double eps_rel = 12.7;
  MatterConfig matter;
  std::vector<ModeConfig> modes;
  double theta1_deg = 0.0, theta2_deg = 90.0, theta3_deg = 90.0;
  std::optional<BathSpec> bath;
  InitialConfig initial;
  DriveConfig drive;
  PropagationSettings propagation;
  AnalysisConfig analysis;
  bool convergence_check = false;
  std::optional<double> memory_budget_mb;
  OutputConfig output;

  const ModeConfig& mode(int label) const;
  ModeConfig& mode(int label);
  bool has_mode(int label) const;
  // Static checks that do not need the matter spectrum.
  void validate() const;
  std::vector<int> effective_few_levels() const;
};

ScenarioConfig scenario_from_json(const json& j);
json scenario_to_json(const ScenarioConfig& c);

enum class SweepParameter { kTheta1, kV0, kLambda, kXi1 };
std::string to_string(SweepParameter p);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kTheta1;
  std::vector<double> values;  // degrees, meV, dimensionless, dimensionless
  // Raise n_max of mode 1 until the coherent tail fits when sweeping xi1.
  bool auto_truncation = true;
  int jobs = 1;
  std::string output;  // CSV table

  void validate() const;
};

struct CompareSpec {
  std::vector<Method> methods{Method::kFull, Method::kFewLevel, Method::kMeanField};
  std::string output_csv;
  std::string output_summary;
};

// A configuration document: a run, a sweep, a comparison, or a coupling table.
struct CouplingTableSpec {
  std::vector<double> cavity_lengths_um;
  std::vector<double> lambdas;  // as tabulated
  std::vector<double> omegas_meV;
  std::string output;
};

struct ConfigDocument {
  std::string type;  // "run", "sweep", "compare", "couplings"
  ScenarioConfig scenario;
  SweepSpec sweep;
  CompareSpec compare;
  CouplingTableSpec couplings;
};

ConfigDocument document_from_json(const json& j);
ConfigDocument load_document(const std::string& path_or_preset);

}  // namespace pdc
