// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 2 3 13     run only the listed ones
//
// Matter solves are cached through $PDC_MATTER_CACHE; runs with identical
// configurations are shared between criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdcqed/config.hpp"
#include "pdcqed/errors.hpp"
#include "pdcqed/observables.hpp"
#include "pdcqed/presets.hpp"
#include "pdcqed/propagator.hpp"
#include "pdcqed/scenarios.hpp"
#include "pdcqed/units.hpp"
#include "synthetic.hpp"

using namespace pdc;
using namespace pdc::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string g4(double x) { return fmt("%.4g", x); }

std::string list(const std::vector<double>& v, const char* f = "%.4g") {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(f, v[i]);
  return s + "}";
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}
bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}
bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] <= v[i - 1])) return false;
  return true;
}

void progress(const std::string& msg) { std::cerr << "  .. " << msg << std::endl; }

// ---------------------------------------------------------------------------
// Shared runs

struct RunRecord {
  ScenarioConfig cfg;
  ScenarioResult result;
  RunMetrics metrics;
  double runtime_s = 0.0;
};

std::map<std::string, RunRecord> g_runs;

std::string run_key(ScenarioConfig c) {
  c.name.clear();
  c.output = {};
  return scenario_to_json(c).dump();
}

const RunRecord& run(const ScenarioConfig& cfg) {
  const std::string key = run_key(cfg);
  if (auto it = g_runs.find(key); it != g_runs.end()) return it->second;
  progress("run " + cfg.name + " (" + to_string(cfg.method) + ")");
  RunRecord r;
  r.cfg = cfg;
  RunOptions opt;
  opt.write_outputs = false;
  const auto t0 = Clock::now();
  r.result = run_scenario(cfg, opt);
  r.runtime_s = seconds_since(t0);
  r.metrics = run_metrics(r.result.series, cfg);
  progress("   done in " + fmt("%.0f", r.runtime_s) + " s: n2_max " + g4(r.metrics.n2_max) + ", q2_min " +
           g4(r.metrics.q2_min));
  return g_runs.emplace(key, std::move(r)).first->second;
}

ScenarioConfig preset_scenario(const std::string& name) { return load_document(name).scenario; }

struct SweepResult {
  std::vector<double> values;
  std::vector<const RunRecord*> rows;
};

SweepResult sweep(const std::string& preset, const std::function<void(ScenarioConfig&)>& tweak = {}) {
  const auto doc = load_document(preset);
  SweepResult out;
  for (double v : doc.sweep.values) {
    ScenarioConfig c = apply_sweep_value(doc.scenario, doc.sweep, v);
    if (tweak) tweak(c);
    out.values.push_back(v);
    out.rows.push_back(&run(c));
  }
  return out;
}

std::vector<double> column(const SweepResult& s, const std::function<double(const RunRecord&)>& f) {
  std::vector<double> v;
  for (const auto* r : s.rows) v.push_back(f(*r));
  return v;
}

// ---------------------------------------------------------------------------
// Matter helpers

const double kV0[] = {0, 50, 100, 150, 200, 250, 300};

ScenarioConfig v0_config(double v0) {
  const auto doc = load_document("degenerate-v0-sweep");
  return apply_sweep_value(doc.scenario, doc.sweep, v0);
}

int level_index(const MatterEigenbasis& b, int j, int l) {
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.j_labels[i] == j && b.l_labels[i] == l) return static_cast<int>(i);
  throw NumericalError("no level j=" + std::to_string(j) + " l=" + std::to_string(l));
}

double group_energy(const MatterEigenbasis& b, int j) {
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.j_labels[i] == j) return b.energies[i];
  throw NumericalError("no level group " + std::to_string(j));
}

// ---------------------------------------------------------------------------
// Criteria

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome harmonic_limit() {
  const auto t0 = Clock::now();
  MatterSolveOptions opt;
  opt.strict_angular_momentum = false;  // shells with |l| >= 4 mix l and l -+ 4 on the square grid
  const auto m = solve_ring(0.0, 21, opt);  // six shells: 1 + 2 + ... + 6
  const auto& b = m.basis;
  const double w0 = energy_to_eff(10.0);
  // Shells by proximity to (n + 1) hw0; the solver's own grouping tolerance is
  // tighter than the grid splitting of the upper shells.
  double dev_2n1 = 0.0, dev_n1 = 0.0;
  std::vector<int> count(6, 0);
  std::vector<double> shells(6, 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int n = static_cast<int>(std::lround(b.energies[i] / w0)) - 1;
    if (n < 0 || n >= 6) continue;
    ++count[n];
    shells[n] = std::max(shells[n], b.energies[i] / w0);
    dev_2n1 = std::max(dev_2n1, std::abs(b.energies[i] / (w0 * (2 * n + 1)) - 1.0));
    dev_n1 = std::max(dev_n1, std::abs(b.energies[i] / (w0 * (n + 1)) - 1.0));
  }
  bool deg_ok = true;
  std::vector<double> deg;
  for (int n = 0; n < 6; ++n) {
    deg_ok = deg_ok && count[n] == n + 1;
    deg.push_back(count[n]);
  }
  const double rt = seconds_since(t0);
  Outcome o;
  o.pass = dev_2n1 < 2e-3 && deg_ok && rt < 300.0;
  o.detail = "E/hw0 by shell " + list(shells, "%.5f") + "; max rel dev from (2n+1): " + g4(dev_2n1) +
             " (tol 2e-3); from (n+1): " + g4(dev_n1) + "; degeneracies " + list(deg, "%.0f") +
             "; " + fmt("%.0f", rt) + " s";
  return o;
}

Outcome pump_energies() {
  const auto t0 = Clock::now();
  const double want[] = {10.00, 3.121, 1.924, 1.580, 1.413, 1.311, 1.239};
  std::vector<double> got, rel;
  bool ok = true;
  for (int k = 0; k < 7; ++k) {
    const auto m = obtain_matter(v0_config(kV0[k]));
    const double de = energy_from_eff(group_energy(m->basis, 2) - group_energy(m->basis, 1));
    got.push_back(de);
    rel.push_back(std::abs(de / want[k] - 1.0));
    ok = ok && rel.back() < 0.01;
  }
  const double rt = seconds_since(t0);
  Outcome o;
  o.pass = ok && rt < 1800.0;
  o.detail = "E(j2)-E(j1) meV " + list(got, "%.4f") + "; rel dev " + list(rel, "%.2e") + " (tol 1e-2); " +
             fmt("%.0f", rt) + " s";
  return o;
}

Outcome dipoles() {
  const auto m200 = obtain_matter(v0_config(200.0));
  const auto& b = m200->basis;
  const auto& x = m200->transitions.x_dip;
  const int j1 = level_index(b, 1, 0), j2 = level_index(b, 2, 1), j6 = level_index(b, 6, 0),
            j7 = level_index(b, 7, 1);
  const std::vector<double> got{std::abs(x(j1, j7)), std::abs(x(j6, j7)), std::abs(x(j1, j2))};
  const std::vector<double> want{0.2077, 1.2786, 1.0867};
  bool ok = true;
  std::vector<double> rel;
  for (std::size_t i = 0; i < got.size(); ++i) {
    rel.push_back(std::abs(got[i] / want[i] - 1.0));
    ok = ok && rel.back() < 0.01;
  }
  const double forbidden = std::abs(x(j1, j6));
  ok = ok && forbidden < 1e-8;

  const double col[] = {0.53159199, 0.84520553, 0.97645376, 1.04263107, 1.08705932, 1.11987106, 1.14420501};
  std::vector<double> sweep_got, sweep_rel;
  for (int k = 0; k < 7; ++k) {
    const auto m = obtain_matter(v0_config(kV0[k]));
    const double d = std::abs(m->transitions.x_dip(level_index(m->basis, 1, 0), level_index(m->basis, 2, 1)));
    sweep_got.push_back(d);
    sweep_rel.push_back(std::abs(d / col[k] - 1.0));
    ok = ok && sweep_rel.back() < 0.01;
  }
  Outcome o;
  o.pass = ok;
  o.detail = "V0=200 |x| (1-7, 6-7, 1-2) " + list(got, "%.4f") + " rel dev " + list(rel, "%.1e") + "; |<1|x|6>| " +
             g4(forbidden) + " (tol 1e-8); V0 column " + list(sweep_got, "%.4f") + " rel dev " +
             list(sweep_rel, "%.1e") + " (tol 1e-2)";
  return o;
}

Outcome couplings() {
  const auto spec = load_document("couplings").couplings;
  // Columns weak, strong, ultra-strong; rows g1, g2, g3, g1g2, g1g3, g2g3.
  const double g_table[3][3] = {{0.00675, 0.00954, 0.01232}, {0.02875, 0.04065, 0.05249}, {0.00694, 0.00981, 0.01267}};
  const double p_table[3][3] = {{0.00019, 0.00039, 0.00065}, {0.00005, 0.00009, 0.00016}, {0.00020, 0.00040, 0.00067}};
  double dg = 0.0, dp = 0.0, dg_cav = 0.0;
  for (int c = 0; c < 3; ++c) {
    double g[3], gc[3];
    for (int a = 0; a < 3; ++a) {
      const double w = energy_to_eff(spec.omegas_meV[a]);
      g[a] = effective_coupling(spec.lambdas[c], w);
      gc[a] = effective_coupling(lambda_from_cavity_length(spec.cavity_lengths_um[c]), w);
      dg = std::max(dg, std::abs(g[a] - g_table[a][c]));
      dg_cav = std::max(dg_cav, std::abs(gc[a] - g_table[a][c]));
    }
    const double prod[3] = {g[0] * g[1], g[0] * g[2], g[1] * g[2]};
    for (int r = 0; r < 3; ++r) dp = std::max(dp, std::abs(prod[r] - p_table[r][c]));
  }
  Outcome o;
  o.pass = dg <= 5e-5 && dp <= 5e-6;
  o.detail = "max |g - table| " + g4(dg) + " (tol 5e-5); max |g_i g_j - table| " + g4(dp) +
             " (tol 5e-6); with the cavity-length lambda instead: max |g - table| " + g4(dg_cav);
  return o;
}

Outcome degenerate_scenario() {
  const auto& r = run(preset_scenario("degenerate"));
  const auto& m = r.metrics;
  const bool n_ok = m.n2_max >= 0.033 && m.n2_max <= 0.050;
  const bool q_ok = m.q2_min < -0.015;
  const bool t_ok = std::abs(m.t_n2_max_ps - 5.84) <= 1.0;
  Outcome o;
  o.pass = n_ok && q_ok && t_ok && r.runtime_s < 4 * 3600.0;
  o.detail = "n2_max " + g4(m.n2_max) + " (want [0.033, 0.050]); q2_min " + g4(m.q2_min) + " (want < -0.015); t(n2_max) " +
             fmt("%.2f", m.t_n2_max_ps) + " ps (want 5.84 +- 1); dim " +
             std::to_string(r.result.summary["dimension"].get<std::size_t>()) + "; " + fmt("%.0f", r.runtime_s) + " s";
  return o;
}

Outcome theta_monotonicity() {
  const auto s = sweep("degenerate-theta-sweep");
  const auto n2 = column(s, [](const RunRecord& r) { return r.metrics.n2_max; });
  const auto q2 = column(s, [](const RunRecord& r) { return r.metrics.q2_min; });
  Outcome o;
  o.pass = strictly_increasing(n2) && non_increasing(q2) && std::abs(q2.front()) <= 5e-3;
  o.detail = "theta1 " + list(s.values) + ": n2_max " + list(n2) + ", q2_min " + list(q2);
  return o;
}

Outcome v0_monotonicity() {
  const auto s = sweep("degenerate-v0-sweep");
  const auto n2 = column(s, [](const RunRecord& r) { return r.metrics.n2_max; });
  const auto q2 = column(s, [](const RunRecord& r) { return r.metrics.q2_min; });
  Outcome o;
  o.pass = strictly_increasing(n2) && strictly_decreasing(q2);
  o.detail = "V0 " + list(s.values) + ": n2_max " + list(n2) + ", q2_min " + list(q2);
  return o;
}

Outcome method_ordering() {
  ScenarioConfig c = preset_scenario("degenerate");
  const auto& full = run(c);
  c.method = Method::kFewLevel;
  const auto& few = run(c);
  c.method = Method::kMeanField;
  const auto& mf = run(c);
  bool q_zero = true;
  std::size_t defined = 0;
  for (const auto& m : mf.result.series.modes)
    for (const auto& q : m.Q)
      if (q) {
        ++defined;
        q_zero = q_zero && *q == 0.0;
      }
  Outcome o;
  o.pass = few.metrics.n2_max > full.metrics.n2_max && full.metrics.n2_max > mf.metrics.n2_max && q_zero;
  o.detail = "n2_max few-level " + g4(few.metrics.n2_max) + ", full " + g4(full.metrics.n2_max) + ", mean field " +
             g4(mf.metrics.n2_max) + "; mean-field Q identically zero over " + std::to_string(defined) +
             " defined samples: " + (q_zero ? "yes" : "no");
  return o;
}

Outcome efficiency_trends() {
  auto eta = [](const RunRecord& r) { return r.metrics.eta.value_or(std::nan("")); };
  const auto xi = sweep("degenerate-xi-sweep");
  const auto lam = sweep("degenerate-lambda-sweep");
  const auto e_xi = column(xi, eta), e_lam = column(lam, eta);
  Outcome o;
  o.pass = strictly_decreasing(e_xi) && strictly_increasing(e_lam);
  o.detail = "eta vs xi1 " + list(xi.values) + ": " + list(e_xi) + "; eta vs lambda " + list(lam.values, "%.3f") +
             ": " + list(e_lam);
  return o;
}

// Reduced photon truncation: one pump photon keeps the dynamics near the
// one- and two-photon sectors, so 5 Fock states per mode are converged here.
constexpr int kFockSweepNmax = 4;

Outcome temporal_control() {
  const auto s = sweep("nondegenerate-lambda-sweep", [](ScenarioConfig& c) {
    for (auto& m : c.modes) m.n_max = kFockSweepNmax;
  });
  const auto t = column(s, [](const RunRecord& r) { return r.metrics.first_peak_ps; });
  // Convergence in the photon cutoff at the strongest coupling.
  ScenarioConfig c = s.rows.back()->cfg;
  for (auto& m : c.modes) m.n_max = kFockSweepNmax + 2;
  const auto& wider = run(c);
  Outcome o;
  o.pass = strictly_decreasing(t);
  o.detail = "lambda " + list(s.values, "%.3f") + ": first n2 peak (ps) " + list(t, "%.3f") + "; n_max " +
             std::to_string(kFockSweepNmax) + " (with n_max " + std::to_string(kFockSweepNmax + 2) +
             " at lambda " + fmt("%.3f", s.values.back()) + ": " + fmt("%.3f", wider.metrics.first_peak_ps) + " ps)";
  return o;
}

CMatrix random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      a(i, j) = i == j ? cplx(g(rng)) : cplx(g(rng), g(rng));
      a(j, i) = std::conj(a(i, j));
    }
  return a / std::sqrt(double(n));
}

Outcome propagator_oracle() {
  const int n = 128;
  const CMatrix h = random_hermitian(n, 7);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  CVector psi0(n);
  for (auto& z : psi0) z = {g(rng), g(rng)};
  psi0.normalize();
  const double dt = 0.05;
  HamiltonianModel model(SparseHermitianOp(SparseMatrix::from_dense(h)));
  PropagatorConfig cfg;
  cfg.dt = dt;
  cfg.t_end = 1000 * dt;
  cfg.krylov_dim = 40;
  cfg.krylov_tol = 1e-14;
  cfg.record_stride = 100;
  double err = 0.0;
  propagate(model, {psi0, 0.0}, cfg, [&](const CoupledState& s) {
    err = std::max(err, (s.amplitudes - dense_evolve(h, psi0, s.time)).norm());
  });

  // Norm drift: 1000 steps of every run preset, plus every run made so far.
  double drift = 0.0;
  std::vector<std::string> covered, refused;
  auto account = [&](const std::string& name, const nlohmann::json& sm) {
    if (!sm.contains("total_norm_defect")) return;
    const double steps = sm["steps"].get<double>();
    drift = std::max(drift, sm["total_norm_defect"].get<double>() * 1000.0 / std::max(steps, 1.0));
    covered.push_back(name);
  };
  for (const auto& p : list_presets()) {
    if (p.type != "run") continue;
    ScenarioConfig c = preset_scenario(p.name);
    c.propagation.t_end_ps = std::min(c.propagation.t_end_ps, 1000 * c.propagation.dt_fs / 1000.0);
    c.analysis.t_to_ps = c.propagation.t_end_ps;
    try {
      account(p.name, run(c).result.summary);
    } catch (const ResourceError&) {
      refused.push_back(p.name);
    }
  }
  std::size_t quantum_runs = 0;
  for (const auto& [k, r] : g_runs)
    if (r.result.summary.contains("total_norm_defect")) {
      ++quantum_runs;
      account(r.cfg.name, r.result.summary);
    }
  std::string refused_s;
  for (const auto& r : refused) refused_s += (refused_s.empty() ? "" : ", ") + r;
  Outcome o;
  o.pass = err < 1e-10 && drift < 1e-10;
  o.detail = "dim 128, 1000 steps: max |psi_krylov - psi_dense| " + g4(err) + " (tol 1e-10); norm drift per 1000 steps " +
             g4(drift) + " (tol 1e-10) over " + std::to_string(quantum_runs) + " propagations" +
             (refused.empty() ? "" : "; refused by the memory budget: " + refused_s);
  return o;
}

Outcome bath_robustness() {
  const auto& free = run(preset_scenario("nondegenerate-small"));
  const auto& bath = run(preset_scenario("nondegenerate-bath"));
  const double dev = std::abs(bath.metrics.n2_max / free.metrics.n2_max - 1.0);
  Outcome o;
  o.pass = dev < 0.3 && bath.metrics.t_n2_max_ps >= free.metrics.t_n2_max_ps - 1e-9;
  o.detail = "n2_max bath-free " + g4(free.metrics.n2_max) + " at " + fmt("%.2f", free.metrics.t_n2_max_ps) +
             " ps, with 20 bath modes " + g4(bath.metrics.n2_max) + " at " + fmt("%.2f", bath.metrics.t_n2_max_ps) +
             " ps; rel dev " + g4(dev) + " (tol 0.3); dim " +
             std::to_string(bath.result.summary["dimension"].get<std::size_t>()) + "; " +
             fmt("%.0f", bath.runtime_s) + " s";
  return o;
}

CVector product(const std::vector<CVector>& f) {
  CVector out = CVector::Ones(1);
  for (const auto& v : f) {
    CVector next(out.size() * v.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * v.size(), v.size()) = out(i) * v;
    out = next;
  }
  return out;
}

CVector fock(int dim, int k) {
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

Outcome observables() {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  const CoupledBasis two(1, {make_mode(1, 1.0, 40, 0.0), make_mode(2, 0.5, 40, 0.0)});
  const CVector coh = product({CVector::Ones(1), coherent_state({1.2, -0.5}, 40, 1e-14), fock(41, 0)});
  const double q_coh = *mandel_q(coh, two, 1);
  expect(std::abs(q_coh) <= 1e-6, "Q(coherent)");
  const CVector one = product({CVector::Ones(1), fock(41, 1), fock(41, 0)});
  expect(*mandel_q(one, two, 1) == -1.0, "Q(|1>)");
  const CVector cc =
      product({CVector::Ones(1), coherent_state({0.9, 0.3}, 40, 1e-14), coherent_state({-0.6, 0.8}, 40, 1e-14)});
  const double g_cc = *g2_cross(cc, two, 1, 2);
  expect(std::abs(g_cc - 1.0) <= 1e-6, "g2(product coherent)");

  // (|0,0> + |1,1>)/sqrt2: <n1 n2> = 1/2 and <n1> = <n2> = 1/2 give g2 = 2; each
  // reduced state is diag(1/2, 1/2) with purity 1/2.
  const CoupledBasis pair(1, {make_mode(1, 1.0, 2, 0.0), make_mode(2, 0.5, 2, 0.0)});
  const CVector bell =
      (product({CVector::Ones(1), fock(3, 0), fock(3, 0)}) + product({CVector::Ones(1), fock(3, 1), fock(3, 1)})) /
      std::sqrt(2.0);
  const double g_bell = *g2_cross(bell, pair, 1, 2);
  expect(std::abs(g_bell - 2.0) <= 1e-12, "g2(Bell)");
  const double pur = purity_factor(bell, pair, 1);
  expect(std::abs(pur - 0.5) <= 1e-12, "purity(Bell)");

  // n = sum k P_k on every snapshot of a coupled propagation, with P_k and n
  // both recomputed from the amplitudes.
  const auto mat = synthetic_matter(4, 11);
  const CoupledBasis basis(4, {make_mode(1, 0.9, 4, 0.4, {0.0, 1.0}), make_mode(2, 0.45, 4, 0.4, {1.0, 0.0})});
  HamiltonianModel model(assemble_coupled(basis, mat));
  CVector psi0 = CVector::Zero(basis.dimension());
  psi0(basis.flatten({0, 3, 0})) = 1.0;
  PropagatorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 40.0;
  cfg.record_stride = 4;
  double dn = 0.0;
  std::size_t snaps = 0;
  propagate(model, {psi0, 0.0}, cfg, [&](const CoupledState& s) {
    ++snaps;
    for (int label : {1, 2}) {
      const std::size_t f = basis.mode_factor(label);
      std::vector<double> p(basis.factor_dim(f), 0.0);
      for (std::size_t i = 0; i < basis.dimension(); ++i) p[basis.component(i, f)] += std::norm(s.amplitudes(i));
      double sum = 0.0;
      for (std::size_t k = 1; k < p.size(); ++k) sum += k * p[k];
      dn = std::max(dn, std::abs(sum - mode_occupation(s.amplitudes, basis, label)));
    }
  });
  expect(dn <= 1e-8, "n = sum k P_k");

  std::string bad_s;
  for (const auto& b : bad) bad_s += (bad_s.empty() ? "" : ", ") + b;
  Outcome o;
  o.pass = bad.empty();
  o.detail = "Q(coherent) " + g4(q_coh) + ", g2(coherent pair) - 1 " + g4(g_cc - 1.0) + ", g2(Bell) " +
             fmt("%.12g", g_bell) + ", purity(Bell) " + fmt("%.12g", pur) + ", max |n - sum k P_k| " + g4(dn) +
             " over " + std::to_string(snaps) + " snapshots" + (bad.empty() ? "" : "; failed: " + bad_s);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*check)();
};

const Criterion kCriteria[] = {
    {1, "harmonic limit of the matter spectrum", harmonic_limit},
    {2, "pump energies across V0", pump_energies},
    {3, "transition dipoles", dipoles},
    {4, "coupling table", couplings},
    {5, "degenerate scenario", degenerate_scenario},
    {6, "theta1 monotonicity", theta_monotonicity},
    {7, "V0 monotonicity", v0_monotonicity},
    {8, "method ordering", method_ordering},
    {9, "efficiency trends", efficiency_trends},
    {10, "temporal control of the first signal peak", temporal_control},
    {11, "propagator oracle and norm drift", propagator_oracle},
    {12, "bath robustness", bath_robustness},
    {13, "observables", observables},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : kCriteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::cerr << "criterion " << c.id << ": " << c.title << std::endl;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.title << "): " << o.detail
              << " [" << fmt("%.0f", seconds_since(t0)) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
