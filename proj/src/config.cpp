#include "pdcqed/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "pdcqed/errors.hpp"
#include "pdcqed/presets.hpp"

namespace pdc {

namespace {

// Strict object reader: every key must be consumed, types are checked.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return req<T>(key);
  }

  template <typename T>
  std::optional<T> opt(const std::string& key) {
    if (!j_.contains(key)) return std::nullopt;
    return req<T>(key);
  }

  template <typename T>
  T req(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError("missing key " + where(key));
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError("");
        return x;
      } else if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer()) throw ConfigError("");
        return v.get<int>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
        return v.get<bool>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
        return v.get<std::string>();
      } else if constexpr (std::is_same_v<T, std::vector<double>>) {
        if (!v.is_array()) throw ConfigError("");
        std::vector<double> out;
        for (const auto& e : v) {
          if (!e.is_number()) throw ConfigError("");
          out.push_back(e.get<double>());
        }
        return out;
      } else if constexpr (std::is_same_v<T, std::vector<int>>) {
        if (!v.is_array()) throw ConfigError("");
        std::vector<int> out;
        for (const auto& e : v) {
          if (!e.is_number_integer()) throw ConfigError("");
          out.push_back(e.get<int>());
        }
        return out;
      } else {
        static_assert(sizeof(T) == 0, "unsupported config type");
      }
    } catch (const ConfigError&) {
      throw ConfigError("wrong type for " + where(key));
    }
  }

  const json& child(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return "'" + path_ + "'";
    return "'" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ConfigError("unknown key " + where(k));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

LevelCut parse_level_cut(const std::string& s) {
  if (s == "error") return LevelCut::kError;
  if (s == "extend") return LevelCut::kExtend;
  if (s == "truncate") return LevelCut::kTruncate;
  throw ConfigError("level_cut must be error, extend or truncate, not '" + s + "'");
}

std::string level_cut_name(LevelCut c) {
  switch (c) {
    case LevelCut::kError: return "error";
    case LevelCut::kExtend: return "extend";
    case LevelCut::kTruncate: return "truncate";
  }
  return "error";
}

DriveKind parse_drive_kind(const std::string& s) {
  if (s == "none") return DriveKind::kNone;
  if (s == "current") return DriveKind::kClassicalCurrent;
  if (s == "field") return DriveKind::kClassicalField;
  throw ConfigError("drive kind must be none, current or field, not '" + s + "'");
}

std::string drive_kind_name(DriveKind k) {
  switch (k) {
    case DriveKind::kNone: return "none";
    case DriveKind::kClassicalCurrent: return "current";
    case DriveKind::kClassicalField: return "field";
  }
  return "none";
}

MatterConfig read_matter(Reader r) {
  MatterConfig m;
  m.v0_meV = r.get("V0_meV", m.v0_meV);
  m.omega0_meV = r.get("omega0_meV", m.omega0_meV);
  m.d_nm = r.get("d_nm", m.d_nm);
  m.n_states = r.get("n_states", m.n_states);
  m.grid_points = r.get("grid_points", m.grid_points);
  m.dx_nm = r.get("dx_nm", m.dx_nm);
  m.stencil_order = r.get("stencil_order", m.stencil_order);
  m.level_cut = parse_level_cut(r.get<std::string>("level_cut", "error"));
  m.cache_dir = r.get<std::string>("cache_dir", "");
  r.finish();
  return m;
}

std::vector<ModeConfig> read_modes(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("'" + path + "' must be an array");
  std::vector<ModeConfig> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Reader r(j[i], path + "[" + std::to_string(i) + "]");
    ModeConfig m;
    m.label = r.req<int>("label");
    m.omega_meV = r.opt<double>("omega_meV");
    m.n_max = r.get("n_max", m.n_max);
    m.lambda = r.req<double>("lambda");
    r.finish();
    out.push_back(m);
  }
  return out;
}

BathSpec read_bath(Reader r) {
  BathSpec b;
  const json& w = r.child("windows");
  if (!w.is_array()) throw ConfigError(r.where("windows") + " must be an array");
  for (std::size_t i = 0; i < w.size(); ++i) {
    Reader wr(w[i], r.path("windows") + "[" + std::to_string(i) + "]");
    BathWindow bw;
    bw.low_meV = wr.req<double>("low_meV");
    bw.high_meV = wr.req<double>("high_meV");
    bw.n_modes = wr.req<int>("n_modes");
    bw.parent_label = wr.get("parent", bw.parent_label);
    wr.finish();
    b.windows.push_back(bw);
  }
  b.lambda_bath = r.get("lambda", b.lambda_bath);
  b.sector = r.get("sector", b.sector);
  b.n_max_per_mode = r.get("n_max_per_mode", b.n_max_per_mode);
  r.finish();
  return b;
}

InitialConfig read_initial(Reader r) {
  InitialConfig ic;
  ic.ground_state = r.get("ground_state", false);
  ic.matter_state = r.get("matter_state", 0);
  if (r.has("modes")) {
    const json& m = r.child("modes");
    Reader mr(m, r.path("modes"));
    for (const auto& [key, val] : m.items()) {
      int label = 0;
      try {
        std::size_t pos = 0;
        label = std::stoi(key, &pos);
        if (pos != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("initial mode keys must be mode labels, not '" + key + "'");
      }
      Reader er(mr.child(key), mr.path(key));
      InitialModeConfig im;
      if (er.has("fock")) im.fock = er.req<int>("fock");
      if (er.has("xi_re") || er.has("xi_im")) {
        im.coherent = true;
        im.xi = cplx(er.get("xi_re", 0.0), er.get("xi_im", 0.0));
      }
      er.finish();
      if (im.coherent && im.fock != 0) throw ConfigError("initial mode " + key + " is both Fock and coherent");
      ic.modes[label] = im;
    }
    mr.finish();
  }
  r.finish();
  return ic;
}

DriveConfig read_drive(Reader r) {
  DriveConfig d;
  d.kind = parse_drive_kind(r.get<std::string>("kind", "none"));
  d.amplitude = r.get("amplitude", 0.0);
  d.t0_ps = r.get("t0_ps", 0.0);
  d.tau_ps = r.get("tau_ps", 0.0);
  d.omega_meV = r.opt<double>("omega_meV");
  d.q0 = r.get("q0", 0.0);
  d.qdot0 = r.get("qdot0", 0.0);
  d.calibrate = r.get("calibrate", false);
  d.calibration_time_ps = r.get("calibration_time_ps", 0.0);
  d.calibration_target = r.get("calibration_target", d.calibration_target);
  d.calibration_tol = r.get("calibration_tol", d.calibration_tol);
  r.finish();
  return d;
}

PropagationSettings read_propagation(Reader r) {
  PropagationSettings p;
  p.t_end_ps = r.get("t_end_ps", p.t_end_ps);
  p.dt_fs = r.get("dt_fs", p.dt_fs);
  p.record_every_fs = r.get("record_every_fs", p.record_every_fs);
  p.krylov_dim = r.get("krylov_dim", p.krylov_dim);
  p.krylov_tol = r.get("krylov_tol", p.krylov_tol);
  p.meanfield_dt_fs = r.get("meanfield_dt_fs", p.meanfield_dt_fs);
  p.checkpoint_every = r.get("checkpoint_every", p.checkpoint_every);
  p.checkpoint_path = r.get<std::string>("checkpoint_path", "");
  r.finish();
  return p;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_monotone(const std::vector<double>& v, const std::string& what) {
  require(!v.empty(), what + " must not be empty");
  if (v.size() < 2) return;
  const bool up = v[1] > v[0];
  for (std::size_t i = 1; i < v.size(); ++i)
    require(up ? v[i] > v[i - 1] : v[i] < v[i - 1], what + " must be strictly monotone");
}

}  // namespace

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kNondegenerateFock: return "nondegenerate_fock";
    case ScenarioKind::kNondegenerateCoherent: return "nondegenerate_coherent";
    case ScenarioKind::kNondegenerateBath: return "nondegenerate_bath";
    case ScenarioKind::kCurrentDriven: return "current_driven";
    case ScenarioKind::kFieldDriven: return "field_driven";
    case ScenarioKind::kDegenerate: return "degenerate";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kFull: return "full";
    case Method::kFewLevel: return "few_level";
    case Method::kMeanField: return "mean_field";
  }
  return "?";
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kTheta1: return "theta1";
    case SweepParameter::kV0: return "V0";
    case SweepParameter::kLambda: return "lambda";
    case SweepParameter::kXi1: return "xi1";
  }
  return "?";
}

ScenarioKind parse_kind(const std::string& s) {
  for (auto k : {ScenarioKind::kNondegenerateFock, ScenarioKind::kNondegenerateCoherent,
                 ScenarioKind::kNondegenerateBath, ScenarioKind::kCurrentDriven, ScenarioKind::kFieldDriven,
                 ScenarioKind::kDegenerate})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown scenario kind '" + s + "'");
}

Method parse_method(const std::string& s) {
  for (auto m : {Method::kFull, Method::kFewLevel, Method::kMeanField})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown method '" + s + "'");
}

bool is_degenerate(ScenarioKind k) { return k == ScenarioKind::kDegenerate; }

const ModeConfig& ScenarioConfig::mode(int label) const {
  for (const auto& m : modes)
    if (m.label == label) return m;
  throw ConfigError("configuration has no mode " + std::to_string(label));
}

ModeConfig& ScenarioConfig::mode(int label) {
  return const_cast<ModeConfig&>(static_cast<const ScenarioConfig&>(*this).mode(label));
}

bool ScenarioConfig::has_mode(int label) const {
  return std::any_of(modes.begin(), modes.end(), [&](const ModeConfig& m) { return m.label == label; });
}

std::vector<int> ScenarioConfig::effective_few_levels() const {
  if (!few_levels.empty()) return few_levels;
  if (is_degenerate(kind)) return {0, 1, 2};
  return {0, 9, 10, 11};
}

void ScenarioConfig::validate() const {
  require(mass_eff > 0.0 && eps_rel > 0.0, "units: mass_eff and eps_rel must be positive");
  require(matter.n_states >= 1, "matter.n_states must be at least 1");
  require(matter.grid_points >= 9 && matter.grid_points % 2 == 1, "matter.grid_points must be odd and >= 9");
  require(matter.dx_nm > 0.0 && matter.d_nm > 0.0 && matter.omega0_meV > 0.0,
          "matter: dx_nm, d_nm and omega0_meV must be positive");

  const std::vector<int> want = is_degenerate(kind) ? std::vector<int>{1, 2} : std::vector<int>{1, 2, 3};
  std::vector<int> labels;
  for (const auto& m : modes) labels.push_back(m.label);
  std::sort(labels.begin(), labels.end());
  require(labels == want, "scenario " + to_string(kind) + " needs exactly the modes " +
                              (is_degenerate(kind) ? std::string("1, 2") : std::string("1, 2, 3")));
  int given = 0;
  for (const auto& m : modes) {
    require(m.n_max >= 1, "mode " + std::to_string(m.label) + ": n_max must be at least 1");
    require(m.lambda >= 0.0, "mode " + std::to_string(m.label) + ": lambda must be non-negative");
    if (m.omega_meV) {
      require(*m.omega_meV > 0.0, "mode " + std::to_string(m.label) + ": omega_meV must be positive");
      ++given;
    }
  }
  require(given == 0 || given == static_cast<int>(modes.size()),
          "give omega_meV for every mode or for none (resonant with the matter spectrum)");

  if (bath) {
    require(!is_degenerate(kind), "a bath is only supported in the non-degenerate scenarios");
    bath->validate();
    for (const auto& w : bath->windows)
      require(w.parent_label >= 1 && w.parent_label <= 3, "bath window parent must be mode 1, 2 or 3");
  }
  require(kind != ScenarioKind::kNondegenerateBath || bath.has_value(), "nondegenerate_bath needs a bath block");

  const DriveKind need = kind == ScenarioKind::kCurrentDriven ? DriveKind::kClassicalCurrent
                         : kind == ScenarioKind::kFieldDriven ? DriveKind::kClassicalField
                                                              : DriveKind::kNone;
  require(drive.kind == need, "scenario " + to_string(kind) + " needs drive kind " + drive_kind_name(need));
  if (drive.kind != DriveKind::kNone) {
    require(drive.tau_ps > 0.0, "drive.tau_ps must be positive");
    if (drive.omega_meV) require(*drive.omega_meV > 0.0, "drive.omega_meV must be positive");
    if (drive.calibrate) {
      require(drive.calibration_time_ps > 0.0, "drive.calibration_time_ps must be positive");
      require(drive.calibration_target > 0.0 && drive.calibration_tol > 0.0,
              "drive calibration target and tolerance must be positive");
    }
  }

  require(initial.matter_state >= 0 && initial.matter_state < matter.n_states,
          "initial.matter_state outside the matter basis");
  require(!(initial.ground_state && !initial.modes.empty()),
          "initial: ground_state excludes per-mode initial states");
  for (const auto& [label, im] : initial.modes) {
    require(has_mode(label), "initial state given for unknown mode " + std::to_string(label));
    require(im.fock >= 0 && im.fock <= mode(label).n_max,
            "initial Fock number of mode " + std::to_string(label) + " exceeds n_max");
    if (kind == ScenarioKind::kFieldDriven && label == 1)
      require(im.fock == 0 && !im.coherent, "field_driven: mode 1 is classical and has no initial state");
  }

  if (method == Method::kFewLevel) {
    auto lv = effective_few_levels();
    std::set<int> uniq(lv.begin(), lv.end());
    require(uniq.size() == lv.size(), "few_levels must not repeat");
    for (int l : lv) require(l >= 0 && l < matter.n_states, "few_levels entry outside the matter basis");
    if (!initial.ground_state)
      require(std::find(lv.begin(), lv.end(), initial.matter_state) != lv.end(),
              "few_levels must contain the initial matter state");
  }
  if (method == Method::kMeanField) {
    require(!bath, "the mean-field method has no bath");
    require(kind != ScenarioKind::kFieldDriven, "the mean-field method does not support the field drive");
    for (const auto& [label, im] : initial.modes)
      require(im.fock == 0, "the mean-field method needs coherent or vacuum mode states (mode " +
                                std::to_string(label) + " is a Fock state)");
  }

  const auto& p = propagation;
  require(p.dt_fs > 0.0 && p.t_end_ps > 0.0, "propagation: dt_fs and t_end_ps must be positive");
  require(p.record_every_fs >= p.dt_fs * (1.0 - 1e-9), "propagation.record_every_fs must be at least dt_fs");
  require(p.krylov_dim >= 2, "propagation.krylov_dim must be at least 2");
  require(p.krylov_tol > 0.0, "propagation.krylov_tol must be positive");
  require(p.meanfield_dt_fs > 0.0, "propagation.meanfield_dt_fs must be positive");
  require(p.checkpoint_every >= 0, "propagation.checkpoint_every must be non-negative");
  require(p.checkpoint_every == 0 || !p.checkpoint_path.empty(), "checkpointing needs checkpoint_path");
  require(analysis.t_to_ps > analysis.t_from_ps, "analysis window is empty");
  require(analysis.peak_fraction > 0.0 && analysis.peak_fraction <= 1.0, "analysis.peak_fraction must be in (0, 1]");
  if (memory_budget_mb) require(*memory_budget_mb > 0.0, "memory_budget_mb must be positive");
}

ScenarioConfig scenario_from_json(const json& j) {
  Reader r(j, "");
  ScenarioConfig c;
  if (r.has("type")) require(r.req<std::string>("type") == "run", "a scenario document has type 'run'");
  c.name = r.get<std::string>("name", c.name);
  c.kind = parse_kind(r.req<std::string>("kind"));
  c.method = parse_method(r.get<std::string>("method", "full"));
  c.few_levels = r.get<std::vector<int>>("few_levels", {});
  if (r.has("units")) {
    Reader u(r.child("units"), "units");
    c.mass_eff = u.get("mass_eff", c.mass_eff);
    c.eps_rel = u.get("eps_rel", c.eps_rel);
    u.finish();
  }
  if (r.has("matter")) c.matter = read_matter(Reader(r.child("matter"), "matter"));
  c.modes = read_modes(r.child("modes"), "modes");
  if (r.has("angles_deg")) {
    Reader a(r.child("angles_deg"), "angles_deg");
    c.theta1_deg = a.get("theta1", c.theta1_deg);
    c.theta2_deg = a.get("theta2", c.theta2_deg);
    c.theta3_deg = a.get("theta3", c.theta3_deg);
    a.finish();
  }
  if (r.has("bath")) c.bath = read_bath(Reader(r.child("bath"), "bath"));
  if (r.has("initial")) c.initial = read_initial(Reader(r.child("initial"), "initial"));
  if (r.has("drive")) c.drive = read_drive(Reader(r.child("drive"), "drive"));
  if (r.has("propagation")) c.propagation = read_propagation(Reader(r.child("propagation"), "propagation"));
  if (r.has("analysis")) {
    Reader a(r.child("analysis"), "analysis");
    c.analysis.t_from_ps = a.get("t_from_ps", c.analysis.t_from_ps);
    c.analysis.t_to_ps = a.get("t_to_ps", c.propagation.t_end_ps);
    c.analysis.peak_fraction = a.get("peak_fraction", c.analysis.peak_fraction);
    a.finish();
  } else {
    c.analysis.t_to_ps = c.propagation.t_end_ps;
  }
  c.convergence_check = r.get("convergence_check", false);
  c.memory_budget_mb = r.opt<double>("memory_budget_mb");
  if (r.has("output")) {
    Reader o(r.child("output"), "output");
    c.output.csv = o.get<std::string>("csv", "");
    c.output.summary = o.get<std::string>("summary", "");
    o.finish();
  }
  r.finish();
  c.validate();
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["type"] = "run";
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  j["method"] = to_string(c.method);
  if (!c.few_levels.empty()) j["few_levels"] = c.few_levels;
  j["units"] = {{"mass_eff", c.mass_eff}, {"eps_rel", c.eps_rel}};
  j["matter"] = {{"V0_meV", c.matter.v0_meV},           {"omega0_meV", c.matter.omega0_meV},
                 {"d_nm", c.matter.d_nm},               {"n_states", c.matter.n_states},
                 {"grid_points", c.matter.grid_points}, {"dx_nm", c.matter.dx_nm},
                 {"stencil_order", c.matter.stencil_order}, {"level_cut", level_cut_name(c.matter.level_cut)},
                 {"cache_dir", c.matter.cache_dir}};
  j["modes"] = json::array();
  for (const auto& m : c.modes) {
    json jm = {{"label", m.label}, {"n_max", m.n_max}, {"lambda", m.lambda}};
    if (m.omega_meV) jm["omega_meV"] = *m.omega_meV;
    j["modes"].push_back(jm);
  }
  j["angles_deg"] = {{"theta1", c.theta1_deg}, {"theta2", c.theta2_deg}, {"theta3", c.theta3_deg}};
  if (c.bath) {
    json w = json::array();
    for (const auto& bw : c.bath->windows)
      w.push_back({{"low_meV", bw.low_meV}, {"high_meV", bw.high_meV}, {"n_modes", bw.n_modes},
                   {"parent", bw.parent_label}});
    j["bath"] = {{"windows", w},
                 {"lambda", c.bath->lambda_bath},
                 {"sector", c.bath->sector},
                 {"n_max_per_mode", c.bath->n_max_per_mode}};
  }
  json init = {{"ground_state", c.initial.ground_state}, {"matter_state", c.initial.matter_state}};
  if (!c.initial.modes.empty()) {
    json im = json::object();
    for (const auto& [label, m] : c.initial.modes) {
      if (m.coherent)
        im[std::to_string(label)] = {{"xi_re", m.xi.real()}, {"xi_im", m.xi.imag()}};
      else
        im[std::to_string(label)] = {{"fock", m.fock}};
    }
    init["modes"] = im;
  }
  j["initial"] = init;
  json d = {{"kind", drive_kind_name(c.drive.kind)},
            {"amplitude", c.drive.amplitude},
            {"t0_ps", c.drive.t0_ps},
            {"tau_ps", c.drive.tau_ps},
            {"q0", c.drive.q0},
            {"qdot0", c.drive.qdot0},
            {"calibrate", c.drive.calibrate},
            {"calibration_time_ps", c.drive.calibration_time_ps},
            {"calibration_target", c.drive.calibration_target},
            {"calibration_tol", c.drive.calibration_tol}};
  if (c.drive.omega_meV) d["omega_meV"] = *c.drive.omega_meV;
  j["drive"] = d;
  const auto& p = c.propagation;
  j["propagation"] = {{"t_end_ps", p.t_end_ps},
                      {"dt_fs", p.dt_fs},
                      {"record_every_fs", p.record_every_fs},
                      {"krylov_dim", p.krylov_dim},
                      {"krylov_tol", p.krylov_tol},
                      {"meanfield_dt_fs", p.meanfield_dt_fs},
                      {"checkpoint_every", p.checkpoint_every},
                      {"checkpoint_path", p.checkpoint_path}};
  j["analysis"] = {{"t_from_ps", c.analysis.t_from_ps},
                   {"t_to_ps", c.analysis.t_to_ps},
                   {"peak_fraction", c.analysis.peak_fraction}};
  j["convergence_check"] = c.convergence_check;
  if (c.memory_budget_mb) j["memory_budget_mb"] = *c.memory_budget_mb;
  j["output"] = {{"csv", c.output.csv}, {"summary", c.output.summary}};
  return j;
}

void SweepSpec::validate() const {
  check_monotone(values, "sweep values");
  require(jobs >= 1, "sweep jobs must be at least 1");
  for (double v : values) {
    if (parameter == SweepParameter::kV0) require(v >= 0.0, "V0 sweep values must be non-negative");
    if (parameter == SweepParameter::kLambda) require(v >= 0.0, "lambda sweep values must be non-negative");
  }
}

namespace {

ScenarioConfig read_base(Reader& r) {
  require(r.has("base") != r.has("base_preset"), "give exactly one of 'base' and 'base_preset'");
  if (r.has("base")) return scenario_from_json(r.child("base"));
  const auto doc = document_from_json(preset_json(r.req<std::string>("base_preset")));
  require(doc.type == "run", "base_preset must name a run preset");
  return doc.scenario;
}

SweepParameter parse_parameter(const std::string& s) {
  for (auto p : {SweepParameter::kTheta1, SweepParameter::kV0, SweepParameter::kLambda, SweepParameter::kXi1})
    if (to_string(p) == s) return p;
  throw ConfigError("unknown sweep parameter '" + s + "' (theta1, V0, lambda, xi1)");
}

}  // namespace

ConfigDocument document_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  ConfigDocument doc;
  doc.type = j.value("type", std::string("run"));
  if (doc.type == "run") {
    doc.scenario = scenario_from_json(j);
    return doc;
  }
  Reader r(j, "");
  r.req<std::string>("type");
  if (doc.type == "sweep") {
    doc.scenario = read_base(r);
    doc.sweep.parameter = parse_parameter(r.req<std::string>("parameter"));
    doc.sweep.values = r.req<std::vector<double>>("values");
    doc.sweep.auto_truncation = r.get("auto_truncation", true);
    doc.sweep.jobs = r.get("jobs", 1);
    doc.sweep.output = r.get<std::string>("output", "");
    doc.sweep.validate();
  } else if (doc.type == "compare") {
    doc.scenario = read_base(r);
    if (r.has("methods")) {
      doc.compare.methods.clear();
      const json& m = r.child("methods");
      require(m.is_array() && !m.empty(), "'methods' must be a non-empty array");
      for (const auto& e : m) {
        require(e.is_string(), "'methods' entries must be strings");
        doc.compare.methods.push_back(parse_method(e.get<std::string>()));
      }
    }
    if (r.has("output")) {
      Reader o(r.child("output"), "output");
      doc.compare.output_csv = o.get<std::string>("csv", "");
      doc.compare.output_summary = o.get<std::string>("summary", "");
      o.finish();
    }
  } else if (doc.type == "couplings") {
    doc.couplings.cavity_lengths_um = r.get<std::vector<double>>("cavity_lengths_um", {});
    doc.couplings.lambdas = r.get<std::vector<double>>("lambdas", {});
    doc.couplings.omegas_meV = r.req<std::vector<double>>("omegas_meV");
    doc.couplings.output = r.get<std::string>("output", "");
    require(!doc.couplings.omegas_meV.empty(), "couplings need omegas_meV");
    require(doc.couplings.lambdas.empty() || doc.couplings.cavity_lengths_um.empty() ||
                doc.couplings.lambdas.size() == doc.couplings.cavity_lengths_um.size(),
            "cavity_lengths_um and lambdas must have the same length");
    require(!doc.couplings.lambdas.empty() || !doc.couplings.cavity_lengths_um.empty(),
            "couplings need lambdas or cavity_lengths_um");
    for (double w : doc.couplings.omegas_meV) require(w > 0.0, "omegas_meV must be positive");
    for (double l : doc.couplings.cavity_lengths_um) require(l > 0.0, "cavity lengths must be positive");
  } else {
    throw ConfigError("unknown document type '" + doc.type + "'");
  }
  r.finish();
  return doc;
}

ConfigDocument load_document(const std::string& path_or_preset) {
  if (has_preset(path_or_preset)) return document_from_json(preset_json(path_or_preset));
  std::ifstream f(path_or_preset);
  if (!f) throw ConfigError("'" + path_or_preset + "' is neither a preset nor a readable file");
  json j;
  try {
    j = json::parse(f, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path_or_preset + ": " + e.what());
  }
  return document_from_json(j);
}

}  // namespace pdc
