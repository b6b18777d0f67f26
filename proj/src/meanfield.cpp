#include "pdcqed/meanfield.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "pdcqed/errors.hpp"

namespace pdc {

namespace {

int mode1_index(const std::vector<FockMode>& modes) {
  for (std::size_t a = 0; a < modes.size(); ++a)
    if (modes[a].label == 1) return static_cast<int>(a);
  return -1;
}

double external_current(const DriveSpec& d, double t) {
  return d.kind == DriveKind::kClassicalCurrent ? d.current(t) : 0.0;
}

// Force on p_a at frozen q beyond the free oscillator, excluding the paramagnetic part.
std::vector<double> static_force(const std::vector<double>& q, const std::vector<FockMode>& modes,
                                 const DriveSpec& drive, double t_mid) {
  const std::size_t m = modes.size();
  std::vector<double> f(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    double dia = 0.0;
    for (std::size_t b = 0; b < m; ++b)
      dia += modes[b].lambda * dot(modes[a].polarization, modes[b].polarization) * q[b];
    f[a] = -modes[a].lambda * dia;
  }
  const int i1 = mode1_index(modes);
  if (i1 >= 0) f[i1] -= modes[i1].lambda * external_current(drive, t_mid);
  return f;
}

// Exact free-oscillator flow of every mode over tau.
void rotate_modes(MeanFieldState& s, const std::vector<FockMode>& modes, double tau) {
  for (std::size_t a = 0; a < modes.size(); ++a) {
    const double w = modes[a].omega;
    const double c = std::cos(w * tau), sn = std::sin(w * tau);
    const double q = s.q[a], p = s.p[a];
    s.q[a] = c * q + sn * p / w;
    s.p[a] = c * p - w * sn * q;
  }
}

double diamagnetic_energy(const std::vector<double>& q, const std::vector<FockMode>& modes) {
  double ax = 0.0, ay = 0.0;
  for (std::size_t a = 0; a < modes.size(); ++a) {
    ax += modes[a].lambda * q[a] * modes[a].polarization[0];
    ay += modes[a].lambda * q[a] * modes[a].polarization[1];
  }
  return 0.5 * (ax * ax + ay * ay);
}

double oscillator_energy(const MeanFieldState& s, const std::vector<FockMode>& modes) {
  double e = 0.0;
  for (std::size_t a = 0; a < modes.size(); ++a)
    e += 0.5 * (s.p[a] * s.p[a] + modes[a].omega * modes[a].omega * s.q[a] * s.q[a]);
  return e;
}

// int_0^dt exp(i w s) ds
cplx phase_integral(double w, double dt) {
  const double x = w * dt;
  if (std::abs(x) < 1e-6) return dt * cplx(1.0 - x * x / 6.0, 0.5 * x);
  return (std::exp(cplx(0.0, x)) - 1.0) / cplx(0.0, w);
}

void check_state(const MeanFieldState& s) {
  if (!s.matter.allFinite()) throw NumericalError("mean-field matter state became non-finite");
  for (std::size_t a = 0; a < s.q.size(); ++a)
    if (!std::isfinite(s.q[a]) || !std::isfinite(s.p[a]))
      throw NumericalError("mean-field mode coordinates became non-finite");
}

double renormalize(CVector& c) {
  const double n = c.norm();
  const double defect = std::abs(n - 1.0);
  if (defect > 1e-8) throw NumericalError("mean-field matter norm drifted by " + std::to_string(defect));
  c /= n;
  return defect;
}

void validate_modes(const std::vector<FockMode>& modes, std::size_t q_size) {
  if (modes.empty()) throw ConfigError("mean field needs at least one mode");
  for (const auto& m : modes) m.validate();
  if (q_size != modes.size()) throw ConfigError("mean-field state does not match the mode table");
}

}  // namespace

void MeanFieldParams::validate() const {
  validate_modes(modes, modes.size());
  if (matter.size() == 0) throw ConfigError("mean field needs matter operators");
  if (drive.kind == DriveKind::kClassicalField)
    throw ConfigError("the mean-field path supports only the classical-current drive");
  drive.validate();
}

MeanFieldState mf_initial_state(const CVector& matter, const std::vector<FockMode>& modes,
                                const std::vector<cplx>& xi) {
  if (xi.size() != modes.size()) throw ConfigError("one coherent amplitude per mode is required");
  MeanFieldState s;
  s.matter = matter;
  const double nrm = s.matter.norm();
  if (!(nrm > 0.0)) throw ConfigError("mean-field matter state is zero");
  s.matter /= nrm;
  for (std::size_t a = 0; a < modes.size(); ++a) {
    const double w = modes[a].omega;
    s.q.push_back(std::sqrt(2.0 / w) * xi[a].real());
    s.p.push_back(std::sqrt(2.0 * w) * xi[a].imag());
  }
  return s;
}

std::vector<double> mf_momentum_projections(const MeanFieldState& s, const MeanFieldParams& par) {
  const cplx px = s.matter.dot(par.matter.px * s.matter);
  const cplx py = s.matter.dot(par.matter.py * s.matter);
  std::vector<double> out;
  for (const auto& m : par.modes) out.push_back(m.polarization[0] * px.real() + m.polarization[1] * py.real());
  return out;
}

std::vector<double> mf_currents(const MeanFieldState& s, const MeanFieldParams& par) {
  const auto proj = mf_momentum_projections(s, par);
  std::vector<double> j(par.modes.size());
  for (std::size_t a = 0; a < par.modes.size(); ++a) {
    double dia = 0.0;
    for (std::size_t b = 0; b < par.modes.size(); ++b)
      dia += par.modes[b].lambda * dot(par.modes[a].polarization, par.modes[b].polarization) * s.q[b];
    j[a] = par.modes[a].lambda * (proj[a] - dia);
  }
  return j;
}

double mf_energy(const MeanFieldState& s, const MeanFieldParams& par) {
  const auto proj = mf_momentum_projections(s, par);
  double e = s.matter.dot(par.matter.h_el * s.matter).real();
  for (std::size_t a = 0; a < par.modes.size(); ++a) e -= par.modes[a].lambda * s.q[a] * proj[a];
  return e + diamagnetic_energy(s.q, par.modes) + oscillator_energy(s, par.modes);
}

void ms_step(MeanFieldState& s, const MeanFieldParams& par, double dt) {
  const std::size_t m = par.modes.size();
  validate_modes(par.modes, s.q.size());
  rotate_modes(s, par.modes, 0.5 * dt);

  CMatrix h = par.matter.h_el;
  std::vector<CMatrix> proj(m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto& e = par.modes[a].polarization;
    proj[a] = e[0] * par.matter.px + e[1] * par.matter.py;
    h -= par.modes[a].lambda * s.q[a] * proj[a];
  }
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("mean-field eigen-decomposition failed");
  const CMatrix& v = eig.eigenvectors();
  const Eigen::VectorXd& d = eig.eigenvalues();
  const CVector ct = v.adjoint() * s.matter;
  const auto n = static_cast<Eigen::Index>(d.size());

  // Time integral of <e.P>(s) over the step, in closed form.
  CMatrix rho_f(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) rho_f(i, j) = std::conj(ct(i)) * ct(j) * phase_integral(d(i) - d(j), dt);

  const auto force = static_force(s.q, par.modes, par.drive, s.time + 0.5 * dt);
  for (std::size_t a = 0; a < m; ++a) {
    const CMatrix ma = v.adjoint() * proj[a] * v;
    const double integral = (rho_f.array() * ma.array()).sum().real();
    s.p[a] += dt * force[a] + par.modes[a].lambda * integral;
  }
  CVector phased(n);
  for (Eigen::Index i = 0; i < n; ++i) phased(i) = std::exp(cplx(0.0, -d(i) * dt)) * ct(i);
  s.matter = v * phased;

  rotate_modes(s, par.modes, 0.5 * dt);
  s.time += dt;
  check_state(s);
  renormalize(s.matter);
}

namespace {

std::vector<double> grid_projections(const CVector& psi, const GridMeanFieldParams& par) {
  const cplx px = psi.dot(par.px * psi);
  const cplx py = psi.dot(par.py * psi);
  std::vector<double> out;
  for (const auto& m : par.modes) out.push_back(m.polarization[0] * px.real() + m.polarization[1] * py.real());
  return out;
}

}  // namespace

void ms_step_grid(MeanFieldState& s, const GridMeanFieldParams& par, double dt) {
  const std::size_t m = par.modes.size();
  validate_modes(par.modes, s.q.size());
  if (!par.h_grid || par.h_grid->dim() != static_cast<std::size_t>(s.matter.size()))
    throw ConfigError("grid mean field: Hamiltonian does not match the state");
  rotate_modes(s, par.modes, 0.5 * dt);

  double cx = 0.0, cy = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    cx -= par.modes[a].lambda * s.q[a] * par.modes[a].polarization[0];
    cy -= par.modes[a].lambda * s.q[a] * par.modes[a].polarization[1];
  }
  const auto before = grid_projections(s.matter, par);
  const MatVec h = [&](const cplx* x, cplx* y) {
    par.h_grid->apply(x, y);
    par.px.apply_add(cx, x, y);
    par.py.apply_add(cy, x, y);
  };
  krylov_step_inplace(h, s.matter, dt, par.krylov);
  const auto after = grid_projections(s.matter, par);

  const auto force = static_force(s.q, par.modes, par.drive, s.time + 0.5 * dt);
  for (std::size_t a = 0; a < m; ++a)
    s.p[a] += dt * force[a] + par.modes[a].lambda * 0.5 * dt * (before[a] + after[a]);

  rotate_modes(s, par.modes, 0.5 * dt);
  s.time += dt;
  check_state(s);
  renormalize(s.matter);
}

double mf_energy_grid(const MeanFieldState& s, const GridMeanFieldParams& par) {
  const auto proj = grid_projections(s.matter, par);
  double e = par.h_grid->expectation(s.matter).real();
  for (std::size_t a = 0; a < par.modes.size(); ++a) e -= par.modes[a].lambda * s.q[a] * proj[a];
  return e + diamagnetic_energy(s.q, par.modes) + oscillator_energy(s, par.modes);
}

MeanFieldSnapshot mf_observables(const MeanFieldState& s, const std::vector<FockMode>& modes) {
  validate_modes(modes, s.q.size());
  MeanFieldSnapshot snap;
  for (std::size_t a = 0; a < modes.size(); ++a) {
    const double w = modes[a].omega;
    const double h = 0.5 * (s.p[a] * s.p[a] + w * w * s.q[a] * s.q[a]) + 0.5 * w;
    const double n = h / w - 0.5;
    snap.H.push_back(h);
    snap.n.push_back(n);
    snap.Q.push_back(n >= kOccupationFloor ? Sample(0.0) : std::nullopt);
  }
  for (std::size_t a = 0; a < modes.size(); ++a)
    for (std::size_t b = a + 1; b < modes.size(); ++b)
      snap.g2.push_back(snap.n[a] >= kOccupationFloor && snap.n[b] >= kOccupationFloor ? Sample(1.0)
                                                                                        : std::nullopt);
  return snap;
}

MeanFieldResult run_meanfield(const MeanFieldParams& par, MeanFieldState s, const MeanFieldRun& run) {
  par.validate();
  if (!(run.dt > 0.0) || !(run.t_end > s.time)) throw ConfigError("mean-field run needs dt > 0 and t_end > start");
  if (run.record_stride < 1) throw ConfigError("record stride must be at least 1");
  if (static_cast<std::size_t>(s.matter.size()) != par.matter.size())
    throw ConfigError("mean-field matter state does not match the operators");

  MeanFieldResult res;
  auto& ser = res.series;
  ser.method = "mean_field";
  for (const auto& m : par.modes) {
    ModeSeries ms;
    ms.label = m.label;
    ms.omega = m.omega;
    ser.modes.push_back(ms);
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < par.modes.size(); ++a)
    for (std::size_t b = a + 1; b < par.modes.size(); ++b) {
      const auto key = std::make_pair(std::min(par.modes[a].label, par.modes[b].label),
                                      std::max(par.modes[a].label, par.modes[b].label));
      pairs.push_back(key);
      ser.g2[key] = {};
    }

  auto record = [&](const MeanFieldState& st) {
    const auto snap = mf_observables(st, par.modes);
    ser.times.push_back(st.time);
    for (std::size_t a = 0; a < par.modes.size(); ++a) {
      auto& ms = ser.modes[a];
      ms.n.push_back(snap.n[a]);
      ms.H.push_back(snap.H[a]);
      for (auto& pk : ms.P) pk.push_back(std::nullopt);
      ms.Q.push_back(snap.Q[a]);
      ms.gamma.push_back(std::nullopt);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) ser.g2[pairs[k]].push_back(snap.g2[k]);
    ser.matter_purity.push_back(std::nullopt);
    res.q_history.push_back(st.q);
  };

  const auto steps = static_cast<std::size_t>(std::ceil((run.t_end - s.time) / run.dt - 1e-9));
  const double t0 = s.time;
  record(s);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double target = std::min(run.t_end, t0 + k * run.dt);
    const double before = s.matter.norm();
    ms_step(s, par, target - s.time);
    s.time = target;
    res.max_norm_defect = std::max(res.max_norm_defect, std::abs(before - 1.0));
    if (k % run.record_stride == 0 || k == steps) record(s);
  }
  res.final_state = std::move(s);
  return res;
}

}  // namespace pdc
