#include "pdcqed/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "pdcqed/errors.hpp"
#include "pdcqed/hamiltonian.hpp"
#include "pdcqed/meanfield.hpp"
#include "pdcqed/output.hpp"
#include "pdcqed/propagator.hpp"

namespace pdc {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void say(const RunOptions& opt, const std::string& msg) {
  if (opt.log) opt.log(msg);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string matter_key(const ScenarioConfig& c) {
  std::ostringstream k;
  k.precision(12);
  k << "v0_" << c.matter.v0_meV << "_w0_" << c.matter.omega0_meV << "_d_" << c.matter.d_nm << "_n_"
    << c.matter.n_states << "_g_" << c.matter.grid_points << "_dx_" << c.matter.dx_nm << "_o_"
    << c.matter.stencil_order << "_cut_" << static_cast<int>(c.matter.level_cut) << "_m_" << c.mass_eff << "_eps_"
    << c.eps_rel;
  return k.str();
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, std::shared_ptr<const MatterModel>>& cache() {
  static std::map<std::string, std::shared_ptr<const MatterModel>> c;
  return c;
}

// First state of the 1-based level ordinal j.
double level_energy(const MatterOperators& m, int j) {
  for (std::size_t i = 0; i < m.j_labels.size(); ++i)
    if (m.j_labels[i] == j) return m.h_el(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  throw ConfigError("matter basis has no level " + std::to_string(j) + "; raise matter.n_states");
}

std::size_t bath_size(const BathSpec& b) {
  const std::size_t m = static_cast<std::size_t>(b.count());
  std::size_t n = 1;
  if (b.sector >= 1) n += m;
  if (b.sector >= 2) n += b.n_max_per_mode >= 2 ? m * (m + 1) / 2 : m * (m - 1) / 2;
  return n;
}

CVector product_state(const CoupledBasis& basis, const std::vector<CVector>& factors) {
  CVector psi = CVector::Ones(1);
  for (const auto& f : factors) {
    CVector next(psi.size() * f.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) next.segment(i * f.size(), f.size()) = psi(i) * f;
    psi = std::move(next);
  }
  if (static_cast<std::size_t>(psi.size()) != basis.dimension())
    throw ConfigError("initial product state does not match the basis");
  return psi;
}

CVector unit(std::size_t n, std::size_t k) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

int steps_per_record(double record_fs, double dt_fs) {
  return std::max(1, static_cast<int>(std::lround(record_fs / dt_fs)));
}

nlohmann::json modes_json(const std::vector<FockMode>& modes, const UnitSystem& u) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& m : modes)
    a.push_back({{"label", m.label},
                 {"omega_meV", energy_from_eff(m.omega, u)},
                 {"n_max", m.n_max},
                 {"lambda", m.lambda},
                 {"g", effective_coupling(m.lambda, m.omega)},
                 {"polarization", {m.polarization[0], m.polarization[1]}}});
  return a;
}

nlohmann::json sample_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

double max_drift(const ObservableSeries& a, const ObservableSeries& b, int label) {
  if (!a.has_mode(label) || !b.has_mode(label)) return 0.0;
  const auto& na = a.mode(label).n;
  const auto& nb = b.mode(label).n;
  const std::size_t n = std::min(na.size(), nb.size());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(na[i] - nb[i]));
  return d;
}

}  // namespace

UnitSystem scenario_units(const ScenarioConfig& cfg) { return make_units(cfg.mass_eff, cfg.eps_rel); }

void clear_matter_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex());
  cache().clear();
}

std::shared_ptr<const MatterModel> obtain_matter(const ScenarioConfig& cfg) {
  const std::string key = matter_key(cfg);
  std::lock_guard<std::mutex> lock(cache_mutex());
  if (auto it = cache().find(key); it != cache().end()) return it->second;

  std::string dir = cfg.matter.cache_dir;
  if (dir.empty())
    if (const char* env = std::getenv("PDC_MATTER_CACHE")) dir = env;
  std::string file;
  if (!dir.empty()) {
    file = (std::filesystem::path(dir) / ("matter_" + key + ".bin")).string();
    if (std::filesystem::exists(file)) {
      auto m = std::make_shared<const MatterModel>(load_matter(file));
      cache()[key] = m;
      return m;
    }
  }
  const UnitSystem u = scenario_units(cfg);
  GridSpec grid;
  grid.nx = grid.ny = cfg.matter.grid_points;
  grid.dx = grid.dy = length_to_eff(cfg.matter.dx_nm, u);
  grid.stencil_order = cfg.matter.stencil_order;
  RingPotentialParams pot{energy_to_eff(cfg.matter.omega0_meV, u), length_to_eff(cfg.matter.d_nm, u),
                          energy_to_eff(cfg.matter.v0_meV, u)};
  MatterSolveOptions opt;
  opt.level_cut = cfg.matter.level_cut;
  auto m = std::make_shared<const MatterModel>(solve_ring(pot, cfg.matter.n_states, opt, grid));
  if (!file.empty()) {
    std::filesystem::create_directories(dir);
    const std::string tmp = file + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    save_matter(tmp, *m);
    std::filesystem::rename(tmp, file);
  }
  cache()[key] = m;
  return m;
}

std::vector<FockMode> resolve_modes(const ScenarioConfig& cfg, const MatterOperators& matter) {
  const UnitSystem u = scenario_units(cfg);
  std::map<int, double> omega;
  if (cfg.modes.front().omega_meV) {
    for (const auto& m : cfg.modes) omega[m.label] = energy_to_eff(*m.omega_meV, u);
  } else if (is_degenerate(cfg.kind)) {
    omega[1] = level_energy(matter, 2) - level_energy(matter, 1);
    omega[2] = 0.5 * omega[1];
  } else {
    omega[1] = level_energy(matter, 7) - level_energy(matter, 1);
    omega[3] = level_energy(matter, 6) - level_energy(matter, 1);
    omega[2] = omega[1] - omega[3];
  }
  std::vector<FockMode> modes;
  for (const auto& mc : cfg.modes) {
    FockMode m;
    m.label = mc.label;
    m.omega = omega.at(mc.label);
    m.n_max = mc.n_max;
    m.lambda = mc.lambda;
    modes.push_back(m);
  }
  std::sort(modes.begin(), modes.end(), [](const FockMode& a, const FockMode& b) { return a.label < b.label; });
  MixingAngles angles{cfg.theta1_deg * kDegToRad, cfg.theta2_deg * kDegToRad, cfg.theta3_deg * kDegToRad};
  apply_geometry(modes, angles, is_degenerate(cfg.kind) ? Geometry::kDegenerate : Geometry::kNonDegenerate);
  for (const auto& m : modes) m.validate();
  return modes;
}

void check_resonance(ScenarioKind kind, const std::vector<FockMode>& modes, double rel_tol) {
  std::map<int, double> w;
  for (const auto& m : modes) w[m.label] = m.omega;
  std::ostringstream msg;
  msg.precision(6);
  if (is_degenerate(kind)) {
    const double err = std::abs(w.at(2) - 0.5 * w.at(1)) / (0.5 * w.at(1));
    if (err > rel_tol) {
      msg << "degenerate resonance violated: w2 = " << w.at(2) << " vs w1/2 = " << 0.5 * w.at(1) << " (relative "
          << err << ")";
      throw ConfigError(msg.str());
    }
  } else {
    const double err = std::abs(w.at(1) - w.at(2) - w.at(3)) / w.at(1);
    if (err > rel_tol) {
      msg << "energy conservation violated: w1 = " << w.at(1) << " vs w2 + w3 = " << w.at(2) + w.at(3)
          << " (relative " << err << ")";
      throw ConfigError(msg.str());
    }
  }
}

MemoryEstimate estimate_memory(const ScenarioConfig& cfg) {
  MemoryEstimate e;
  e.matter_dim = cfg.method == Method::kFewLevel ? cfg.effective_few_levels().size()
                                                 : static_cast<std::size_t>(cfg.matter.n_states);
  e.photon_dim = 1;
  std::ostringstream shape;
  shape << e.matter_dim;
  int k = 0;
  for (const auto& m : cfg.modes) {
    if (cfg.kind == ScenarioKind::kFieldDriven && m.label == 1) continue;
    e.photon_dim *= static_cast<std::size_t>(m.n_max) + 1;
    shape << " x " << m.n_max + 1;
    ++k;
  }
  double bath_modes = 0.0;
  if (cfg.bath) {
    e.bath_dim = bath_size(*cfg.bath);
    bath_modes = cfg.bath->count();
    shape << " x " << e.bath_dim << " (bath sector of " << cfg.bath->count() << " modes)";
  }
  e.shape = shape.str();
  const double md = static_cast<double>(e.matter_dim);
  if (cfg.method == Method::kMeanField) {
    e.dimension = e.matter_dim;
    e.nnz_per_row = md;
    e.total_mb = (md * md * 16.0 * 8.0) / 1e6;
    return e;
  }
  e.dimension = e.matter_dim * e.photon_dim * e.bath_dim;
  e.nnz_per_row = md * (1 + 2 * k) + 2 * k + 2 * k * k;
  if (cfg.bath) e.nnz_per_row += md * 2 * bath_modes + 4 * k * bath_modes + 4 * bath_modes;
  const double n = static_cast<double>(e.dimension);
  const double vectors = cfg.propagation.krylov_dim + 6 + (cfg.initial.ground_state ? 62 : 0);
  e.total_mb = (n * e.nnz_per_row * 20.0 + n * 16.0 * vectors) / 1e6;
  return e;
}

double memory_budget_mb(const ScenarioConfig& cfg) {
  if (cfg.memory_budget_mb) return *cfg.memory_budget_mb;
  if (const char* env = std::getenv("PDC_MEMORY_BUDGET_MB")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || !(v > 0.0)) throw ConfigError("PDC_MEMORY_BUDGET_MB must be a positive number");
    return v;
  }
  return 4096.0;
}

DriveSpec drive_from_config(const ScenarioConfig& cfg, const FockMode& mode1) {
  const UnitSystem u = scenario_units(cfg);
  DriveSpec d;
  d.kind = cfg.drive.kind;
  d.amplitude = cfg.drive.amplitude;
  d.t0 = ps_to_eff(cfg.drive.t0_ps, u);
  d.tau = ps_to_eff(cfg.drive.tau_ps, u);
  d.omega = cfg.drive.omega_meV ? energy_to_eff(*cfg.drive.omega_meV, u) : mode1.omega;
  d.q0 = cfg.drive.q0;
  d.qdot0 = cfg.drive.qdot0;
  return d;
}

DriveCalibration calibrate_from_config(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.drive.kind == DriveKind::kNone) throw ConfigError("the scenario has no drive to calibrate");
  const auto matter = obtain_matter(cfg);
  const auto modes = resolve_modes(cfg, matter->ops);
  const FockMode& mode1 = *std::find_if(modes.begin(), modes.end(), [](const FockMode& m) { return m.label == 1; });
  DriveSpec d = drive_from_config(cfg, mode1);
  d.kind = DriveKind::kClassicalCurrent;
  const double t = ps_to_eff(cfg.drive.calibration_time_ps > 0 ? cfg.drive.calibration_time_ps : 0.23,
                             scenario_units(cfg));
  return calibrate_current_drive(d, mode1, t, cfg.drive.calibration_target, cfg.drive.calibration_tol);
}

RunMetrics run_metrics(const ObservableSeries& s, const ScenarioConfig& cfg) {
  const UnitSystem u = scenario_units(cfg);
  const double from = ps_to_eff(cfg.analysis.t_from_ps, u) - 1e-9;
  const double to = ps_to_eff(cfg.analysis.t_to_ps, u) + 1e-9;
  RunMetrics r;
  const auto e = series_extrema(s, 2, from, to);
  r.n2_max = e.n_max;
  r.t_n2_max_ps = eff_to_ps(e.t_n_max, u);
  r.q2_min = e.q_min;
  r.q2_min_raw = e.q_min_raw;
  r.t_q2_min_ps = eff_to_ps(e.t_q_min, u);
  r.first_peak_ps = eff_to_ps(first_major_peak_time(s, 2, cfg.analysis.peak_fraction, from, to), u);
  if (s.has_mode(1) && !s.mode(1).H.empty() && s.mode(1).H.front() > 0.0) r.eta = efficiency_eta(s, 1, 2);
  return r;
}

namespace {

struct Prepared {
  std::shared_ptr<const MatterModel> matter;
  MatterOperators ops;  // possibly restricted
  std::vector<int> levels;
  std::vector<FockMode> modes;  // all configured modes, resolved
  FockMode mode1;
  std::optional<SampledBath> bath;
  std::optional<DriveCalibration> calibration;
  DriveSpec drive;
};

Prepared prepare(const ScenarioConfig& cfg, const RunOptions& opt) {
  Prepared p;
  say(opt, "solving matter (" + std::to_string(cfg.matter.n_states) + " states, V0 = " +
               std::to_string(cfg.matter.v0_meV) + " meV)");
  p.matter = obtain_matter(cfg);
  p.modes = resolve_modes(cfg, p.matter->ops);
  check_resonance(cfg.kind, p.modes);
  p.mode1 = *std::find_if(p.modes.begin(), p.modes.end(), [](const FockMode& m) { return m.label == 1; });
  if (cfg.method == Method::kFewLevel) {
    p.levels = cfg.effective_few_levels();
    for (int l : p.levels)
      if (l >= static_cast<int>(p.matter->ops.size()))
        throw ConfigError("few_levels entry " + std::to_string(l) + " outside the solved basis");
    p.ops = p.matter->ops.restricted(p.levels);
  } else {
    p.ops = p.matter->ops;
  }
  if (cfg.initial.matter_state >= static_cast<int>(p.matter->ops.size()))
    throw ConfigError("initial.matter_state outside the solved basis");
  if (cfg.bath) {
    std::map<int, std::array<double, 2>> pol;
    for (const auto& m : p.modes) pol[m.label] = m.polarization;
    p.bath = sample_bath(*cfg.bath, [pol](int parent) { return pol.at(parent); }, scenario_units(cfg));
  }
  p.drive = drive_from_config(cfg, p.mode1);
  if (cfg.drive.kind != DriveKind::kNone && cfg.drive.calibrate) {
    say(opt, "calibrating the drive amplitude");
    p.calibration = calibrate_from_config(cfg);
    p.drive.amplitude = p.calibration->amplitude;
  }
  return p;
}

nlohmann::json base_summary(const ScenarioConfig& cfg, const Prepared& p, const UnitSystem& u) {
  nlohmann::json s;
  s["name"] = cfg.name;
  s["kind"] = to_string(cfg.kind);
  s["method"] = to_string(cfg.method);
  s["matter_states"] = p.ops.size();
  s["matter_energies_meV"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.ops.h_el.rows(); ++i)
    s["matter_energies_meV"].push_back(energy_from_eff(p.ops.h_el(i, i).real(), u));
  if (!p.levels.empty()) s["few_levels"] = p.levels;
  s["modes"] = modes_json(p.modes, u);
  if (p.bath) s["bath_modes"] = p.bath->modes.size();
  if (cfg.drive.kind != DriveKind::kNone) {
    s["drive"] = {{"amplitude", p.drive.amplitude},
                  {"t0_ps", cfg.drive.t0_ps},
                  {"tau_ps", cfg.drive.tau_ps},
                  {"omega_meV", energy_from_eff(p.drive.omega, u)}};
    if (p.calibration)
      s["drive"]["calibration"] = {{"n1", p.calibration->n1}, {"iterations", p.calibration->iterations}};
  }
  return s;
}

void add_metrics(nlohmann::json& s, const ObservableSeries& series, const ScenarioConfig& cfg) {
  const auto m = run_metrics(series, cfg);
  s["n2_max"] = m.n2_max;
  s["t_n2_max_ps"] = m.t_n2_max_ps;
  s["q2_min"] = m.q2_min;
  s["q2_min_raw"] = sample_or_null(m.q2_min_raw);
  s["t_q2_min_ps"] = m.t_q2_min_ps;
  s["first_n2_peak_ps"] = m.first_peak_ps;
  s["eta"] = m.eta ? nlohmann::json(*m.eta) : nlohmann::json(nullptr);
  s["analysis_window_ps"] = {cfg.analysis.t_from_ps, cfg.analysis.t_to_ps};
}

ScenarioResult run_mean_field(const ScenarioConfig& cfg, const Prepared& p, const RunOptions& opt) {
  const UnitSystem u = scenario_units(cfg);
  MeanFieldParams par;
  par.matter = p.ops;
  par.modes = p.modes;
  par.drive = p.drive;
  std::vector<cplx> xi;
  for (const auto& m : p.modes) {
    auto it = cfg.initial.modes.find(m.label);
    xi.push_back(it != cfg.initial.modes.end() && it->second.coherent ? it->second.xi : cplx(0.0));
  }
  const int k0 = cfg.initial.ground_state ? 0 : cfg.initial.matter_state;
  auto s0 = mf_initial_state(unit(p.ops.size(), k0), p.modes, xi);
  const int stride = steps_per_record(cfg.propagation.record_every_fs, cfg.propagation.meanfield_dt_fs);
  MeanFieldRun run;
  run.dt = time_to_eff(cfg.propagation.record_every_fs / stride, u);
  run.t_end = ps_to_eff(cfg.propagation.t_end_ps, u);
  run.record_stride = stride;
  say(opt, "mean-field propagation");
  auto res = run_meanfield(par, s0, run);
  ScenarioResult out;
  out.series = std::move(res.series);
  out.summary = base_summary(cfg, p, u);
  out.summary["dimension"] = p.ops.size();
  out.summary["dt_fs"] = cfg.propagation.record_every_fs / stride;
  out.summary["max_norm_defect"] = res.max_norm_defect;
  return out;
}

ScenarioResult run_quantum(const ScenarioConfig& cfg, const Prepared& p, const RunOptions& opt) {
  const UnitSystem u = scenario_units(cfg);
  std::vector<FockMode> basis_modes;
  for (const auto& m : p.modes)
    if (!(cfg.kind == ScenarioKind::kFieldDriven && m.label == 1)) basis_modes.push_back(m);
  std::optional<BathBasis> bb;
  if (p.bath) bb = p.bath->basis;
  CoupledBasis basis(p.ops.size(), basis_modes, bb);
  const SampledBath* bath = p.bath ? &*p.bath : nullptr;

  say(opt, "assembling H on " + basis.descriptor() + " (dimension " + std::to_string(basis.dimension()) + ")");
  SparseHermitianOp h0 = cfg.method == Method::kFewLevel ? assemble_few_level(p.levels, p.matter->ops, basis, bath)
                                                         : assemble_coupled(basis, p.ops, bath);
  const std::size_t nnz = h0.nnz();
  HamiltonianModel model(std::move(h0));

  const int stride = steps_per_record(cfg.propagation.record_every_fs, cfg.propagation.dt_fs);
  const double dt_fs = cfg.propagation.record_every_fs / stride;
  const double dt = time_to_eff(dt_fs, u);
  const double t_end = ps_to_eff(cfg.propagation.t_end_ps, u);
  attach_drive(model, p.drive, basis, p.ops, p.mode1, t_end, dt, bath);

  CoupledState psi;
  double e0 = 0.0;
  if (cfg.initial.ground_state) {
    say(opt, "computing the correlated ground state");
    const auto gs = ground_state(model.static_part());
    psi = gs.state;
    e0 = gs.energy;
  } else {
    std::size_t k0 = static_cast<std::size_t>(cfg.initial.matter_state);
    if (!p.levels.empty())
      k0 = static_cast<std::size_t>(std::find(p.levels.begin(), p.levels.end(), cfg.initial.matter_state) -
                                    p.levels.begin());
    std::vector<CVector> factors{unit(p.ops.size(), k0)};
    for (const auto& m : basis_modes) {
      auto it = cfg.initial.modes.find(m.label);
      if (it == cfg.initial.modes.end())
        factors.push_back(unit(m.dim(), 0));
      else if (it->second.coherent)
        factors.push_back(coherent_state(it->second.xi, m.n_max));
      else
        factors.push_back(unit(m.dim(), static_cast<std::size_t>(it->second.fock)));
    }
    if (basis.has_bath()) factors.push_back(unit(basis.bath().size(), 0));
    psi.amplitudes = product_state(basis, factors);
  }
  psi.time = 0.0;

  PropagatorConfig pc;
  pc.dt = dt;
  pc.t_end = t_end;
  pc.krylov_dim = cfg.propagation.krylov_dim;
  pc.krylov_tol = cfg.propagation.krylov_tol;
  pc.record_stride = stride;
  pc.checkpoint_every = cfg.propagation.checkpoint_every;
  pc.checkpoint_path = cfg.propagation.checkpoint_path;

  ObservableRecorder rec(basis, to_string(cfg.method));
  say(opt, "propagating to " + std::to_string(cfg.propagation.t_end_ps) + " ps with dt = " + std::to_string(dt_fs) +
               " fs");
  const auto report = propagate(model, psi, pc, [&rec](const CoupledState& s) { rec(s); }, &basis);

  ScenarioResult out;
  out.series = rec.take();
  out.summary = base_summary(cfg, p, u);
  out.summary["dimension"] = basis.dimension();
  out.summary["basis"] = basis.descriptor();
  out.summary["nnz"] = nnz;
  out.summary["dt_fs"] = dt_fs;
  out.summary["steps"] = report.steps;
  out.summary["max_krylov_dim"] = report.max_krylov_dim;
  out.summary["max_error_estimate"] = report.max_error_estimate;
  out.summary["max_norm_defect"] = report.max_norm_defect;
  out.summary["total_norm_defect"] = report.total_norm_defect;
  if (cfg.initial.ground_state) out.summary["ground_state_energy_meV"] = energy_from_eff(e0, u);
  return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto mem = estimate_memory(cfg);
  const double budget = memory_budget_mb(cfg);
  if (mem.total_mb > budget) {
    std::ostringstream msg;
    msg << "estimated memory " << std::lround(mem.total_mb) << " MB exceeds the budget of " << budget
        << " MB: basis " << mem.shape << " = " << mem.dimension << " states, ~" << std::lround(mem.nnz_per_row)
        << " nonzeros per row";
    throw ResourceError(msg.str());
  }
  const Prepared p = prepare(cfg, opt);
  ScenarioResult res = cfg.method == Method::kMeanField ? run_mean_field(cfg, p, opt) : run_quantum(cfg, p, opt);
  add_metrics(res.summary, res.series, cfg);
  res.summary["memory_estimate_mb"] = mem.total_mb;

  if (cfg.convergence_check && cfg.method != Method::kMeanField) {
    ScenarioConfig wider = cfg;
    wider.convergence_check = false;
    for (auto& m : wider.modes) m.n_max += 5;
    say(opt, "convergence check at n_max + 5");
    RunOptions quiet = opt;
    quiet.write_outputs = false;
    const auto ref = run_scenario(wider, quiet);
    nlohmann::json drift;
    for (const auto& m : res.series.modes)
      drift["max_abs_dn" + std::to_string(m.label)] = max_drift(res.series, ref.series, m.label);
    drift["dn2_max"] = ref.summary["n2_max"].get<double>() - res.summary["n2_max"].get<double>();
    drift["dq2_min"] = ref.summary["q2_min"].get<double>() - res.summary["q2_min"].get<double>();
    res.summary["truncation_drift"] = drift;
  }
  res.summary["runtime_s"] = seconds_since(t0);

  if (opt.write_outputs) {
    if (!cfg.output.csv.empty()) write_series_csv(cfg.output.csv, {&res.series}, scenario_units(cfg));
    if (!cfg.output.summary.empty()) write_json(cfg.output.summary, res.summary);
  }
  return res;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const SweepSpec& sweep, double value) {
  ScenarioConfig c = base;
  std::ostringstream tag;
  tag << base.name << "_" << to_string(sweep.parameter) << "_" << value;
  c.name = tag.str();
  switch (sweep.parameter) {
    case SweepParameter::kTheta1:
      if (!is_degenerate(c.kind)) throw ConfigError("theta1 is only swept in the degenerate scenario");
      c.theta1_deg = value;
      break;
    case SweepParameter::kV0:
      c.matter.v0_meV = value;
      break;
    case SweepParameter::kLambda:
      for (auto& m : c.modes) m.lambda = value;
      break;
    case SweepParameter::kXi1: {
      if (c.initial.ground_state) throw ConfigError("xi1 sweep needs a product initial state");
      auto& im = c.initial.modes[1];
      im = InitialModeConfig{};
      im.coherent = true;
      im.xi = value;
      if (sweep.auto_truncation) {
        auto& m1 = c.mode(1);
        while (poisson_tail(value * value, m1.n_max) > 1e-7) ++m1.n_max;
      }
      break;
    }
  }
  if (!c.output.csv.empty()) {
    const std::filesystem::path p(c.output.csv);
    c.output.csv = (p.parent_path() / (p.stem().string() + "_" + to_string(sweep.parameter) + "_" +
                                       tag.str().substr(tag.str().rfind('_') + 1) + p.extension().string()))
                       .string();
  }
  c.output.summary.clear();
  c.validate();
  return c;
}

std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const ScenarioConfig& base, const RunOptions& opt) {
  sweep.validate();
  std::vector<SweepRow> rows(sweep.values.size());
  auto run_row = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = sweep.values[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto c = apply_sweep_value(base, sweep, row.value);
      say(opt, "sweep row " + to_string(sweep.parameter) + " = " + std::to_string(row.value));
      const auto r = run_scenario(c, opt);
      row.metrics = run_metrics(r.series, c);
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      say(opt, "row failed: " + row.error);
    }
    row.runtime_s = seconds_since(t0);
  };
  const int jobs = std::min<int>(sweep.jobs, static_cast<int>(rows.size()));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_row(i);
  } else {
    std::mutex m;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(m);
            if (next >= rows.size()) return;
            i = next++;
          }
          run_row(i);
        }
      });
    for (auto& t : pool) t.join();
  }
  if (opt.write_outputs && !sweep.output.empty()) write_sweep_csv(sweep.output, rows, sweep.parameter);
  return rows;
}

CompareResult compare_methods(const ScenarioConfig& base, const std::vector<Method>& methods, const RunOptions& opt) {
  if (methods.empty()) throw ConfigError("no methods to compare");
  CompareResult out;
  RunOptions inner = opt;
  inner.write_outputs = false;
  for (Method m : methods) {
    ScenarioConfig c = base;
    c.method = m;
    c.convergence_check = false;
    say(opt, "method " + to_string(m));
    out.runs.push_back(run_scenario(c, inner));
  }
  nlohmann::json s;
  s["scenario"] = base.name;
  s["methods"] = nlohmann::json::object();
  const ObservableSeries* ref = nullptr;
  for (std::size_t i = 0; i < methods.size(); ++i)
    if (methods[i] == Method::kFull) ref = &out.runs[i].series;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& r = out.runs[i];
    nlohmann::json e = {{"n2_max", r.summary["n2_max"]},
                        {"t_n2_max_ps", r.summary["t_n2_max_ps"]},
                        {"q2_min", r.summary["q2_min"]},
                        {"eta", r.summary["eta"]},
                        {"runtime_s", r.summary["runtime_s"]}};
    if (ref && methods[i] != Method::kFull) {
      const auto& full = out.runs[std::distance(methods.begin(), std::find(methods.begin(), methods.end(),
                                                                             Method::kFull))];
      e["dn2_max_vs_full"] = r.summary["n2_max"].get<double>() - full.summary["n2_max"].get<double>();
      e["dq2_min_vs_full"] = r.summary["q2_min"].get<double>() - full.summary["q2_min"].get<double>();
      for (const auto& m : r.series.modes)
        e["max_abs_dn" + std::to_string(m.label) + "_vs_full"] = max_drift(r.series, *ref, m.label);
    }
    s["methods"][to_string(methods[i])] = e;
  }
  out.summary = s;
  if (opt.write_outputs) {
    std::vector<const ObservableSeries*> all;
    for (const auto& r : out.runs) all.push_back(&r.series);
    if (!base.output.csv.empty()) write_series_csv(base.output.csv, all, scenario_units(base));
    if (!base.output.summary.empty()) write_json(base.output.summary, out.summary);
  }
  return out;
}

std::vector<CouplingRow> coupling_table(const CouplingTableSpec& spec, const UnitSystem& u) {
  const std::size_t n = std::max(spec.cavity_lengths_um.size(), spec.lambdas.size());
  std::vector<CouplingRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    CouplingRow r;
    if (i < spec.lambdas.size()) r.lambda_tabulated = spec.lambdas[i];
    if (i < spec.cavity_lengths_um.size()) {
      r.cavity_length_um = spec.cavity_lengths_um[i];
      r.lambda = lambda_from_cavity_length(spec.cavity_lengths_um[i], u);
    } else {
      r.lambda = spec.lambdas[i];
    }
    for (double w : spec.omegas_meV) r.g.push_back(effective_coupling(r.lambda, energy_to_eff(w, u)));
    for (std::size_t a = 0; a < r.g.size(); ++a)
      for (std::size_t b = a + 1; b < r.g.size(); ++b) r.products.push_back(r.g[a] * r.g[b]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pdc
