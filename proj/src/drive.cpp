#include "pdcqed/drive.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "pdcqed/errors.hpp"
#include "pdcqed/propagator.hpp"

namespace pdc {

void DriveSpec::validate() const {
  if (kind == DriveKind::kNone) return;
  if (!(tau > 0.0)) throw ConfigError("drive width tau must be positive");
  if (!(omega > 0.0)) throw ConfigError("drive carrier omega must be positive");
  if (!std::isfinite(amplitude)) throw ConfigError("drive amplitude must be finite");
}

double DriveSpec::current(double t) const {
  if (kind == DriveKind::kNone || amplitude == 0.0) return 0.0;
  const double u = (t - t0) / tau;
  return amplitude * std::exp(-u * u) * std::sin(omega * t);
}

std::vector<double> classical_pump_field(const DriveSpec& drive, const FockMode& mode1, const std::vector<double>& t) {
  if (drive.kind == DriveKind::kNone) throw ConfigError("classical_pump_field needs a current or field drive");
  drive.validate();
  mode1.validate();
  const double w = mode1.omega;
  std::vector<double> q(t.size());
  // C(t) = int_0^t exp(-i w t') j(t') dt'; the integral starts at t' = 0 even if the grid does not.
  cplx c = 0.0;
  double t_prev = 0.0;
  cplx f_prev = drive.current(0.0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_prev) throw ConfigError("time grid must be increasing and start at t >= 0");
    const cplx f = std::exp(cplx(0.0, -w * t[k])) * drive.current(t[k]);
    c += 0.5 * (t[k] - t_prev) * (f + f_prev);
    t_prev = t[k];
    f_prev = f;
    const double forced = -(mode1.lambda / w) * (std::exp(cplx(0.0, w * t[k])) * c).imag();
    q[k] = drive.q0 * std::cos(w * t[k]) + drive.qdot0 / w * std::sin(w * t[k]) + forced;
  }
  return q;
}

PumpField::PumpField(const DriveSpec& drive, const FockMode& mode1, double t_end, double spacing)
    : lambda_(mode1.lambda), h_(spacing) {
  if (!(spacing > 0.0)) throw ConfigError("pump field spacing must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(t_end / spacing)) + 2;
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) grid[k] = k * spacing;
  q_ = classical_pump_field(drive, mode1, grid);
}

double PumpField::q(double t) const {
  if (t <= 0.0) return q_.front();
  const double x = t / h_;
  const auto k = static_cast<std::size_t>(x);
  if (k + 1 >= q_.size()) return q_.back();
  const double f = x - k;
  return (1.0 - f) * q_[k] + f * q_[k + 1];
}

void attach_drive(HamiltonianModel& model, const DriveSpec& drive, const CoupledBasis& basis,
                  const MatterOperators& matter, const FockMode& mode1, double t_end, double dt,
                  const SampledBath* bath) {
  drive.validate();
  if (drive.kind == DriveKind::kNone) return;
  if (drive.kind == DriveKind::kClassicalCurrent) {
    const std::size_t f1 = basis.mode_factor(mode1.label);
    const auto& m1 = basis.mode(mode1.label);
    auto op = std::make_shared<const SparseHermitianOp>(
        assemble_kron_terms(basis, {KronTerm{m1.lambda, {{f1, quadratures(m1).q.matrix()}}}}));
    const DriveSpec d = drive;
    model.add_term({"current_drive", op, [d](double t) { return d.current(t); }});
    return;
  }
  if (basis.has_mode(mode1.label))
    throw ConfigError("field drive replaces mode " + std::to_string(mode1.label) + ", which is still in the basis");
  std::vector<KronTerm> terms;
  terms.push_back({-1.0, {{0, matter_projection(matter, mode1.polarization)}}});
  for (std::size_t a = 0; a < basis.modes().size(); ++a) {
    const auto& m = basis.modes()[a];
    const double k = m.lambda * dot(mode1.polarization, m.polarization);
    if (k != 0.0) terms.push_back({k, {{a + 1, quadratures(m).q.matrix()}}});
  }
  if (bath) {
    const auto& bb = basis.bath();
    int n_windows = 0;
    for (int wi : bath->window_of_mode) n_windows = std::max(n_windows, wi + 1);
    for (int win = 0; win < n_windows; ++win) {
      std::vector<double> c(bb.modes(), 0.0);
      for (int b = 0; b < bb.modes(); ++b) {
        if (bath->window_of_mode[b] != win) continue;
        const auto& mb = bath->modes[b];
        c[b] = mb.lambda * dot(mode1.polarization, mb.polarization) / std::sqrt(2.0 * mb.omega);
      }
      terms.push_back({1.0, {{basis.bath_factor(), bb.linear_form(c)}}});
    }
  }
  auto op = std::make_shared<const SparseHermitianOp>(assemble_kron_terms(basis, terms));
  auto field = std::make_shared<const PumpField>(drive, mode1, t_end + dt, 0.5 * dt);
  model.add_term({"field_drive", op, [field](double t) { return field->vector_potential(t); }});
  model.set_scalar([field](double t) {
    const double a = field->vector_potential(t);
    return 0.5 * a * a;
  });
}

namespace {

double run_mode1_only(const DriveSpec& drive, const FockMode& mode1, double t_target, double dt) {
  CoupledBasis basis(1, {mode1});
  MatterOperators trivial;
  trivial.h_el = trivial.px = trivial.py = trivial.x_dip = trivial.y_dip = CMatrix::Zero(1, 1);
  HamiltonianModel model(assemble_coupled(basis, trivial));
  attach_drive(model, drive, basis, trivial, mode1, t_target, dt);
  CoupledState psi;
  psi.amplitudes = CVector::Zero(basis.dimension());
  psi.amplitudes(0) = 1.0;
  PropagatorConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_target;
  cfg.krylov_dim = 40;
  const auto rep = propagate(model, psi, cfg);
  double n = 0.0;
  const auto& a = rep.final_state.amplitudes;
  for (Eigen::Index k = 0; k < a.size(); ++k) n += k * std::norm(a(k));
  return n;
}

}  // namespace

DriveCalibration calibrate_current_drive(DriveSpec drive, const FockMode& mode1_in, double t_target, double n_target,
                                         double tol, double dt) {
  if (drive.kind != DriveKind::kClassicalCurrent) throw ConfigError("calibration needs a current drive");
  drive.validate();
  if (!(n_target > 0.0) || !(tol > 0.0)) throw ConfigError("calibration target and tolerance must be positive");
  // Decoupled reference: the mode alone, without its coupling to matter.
  FockMode mode1 = mode1_in;
  if (mode1.lambda == 0.0) throw ConfigError("calibration needs a nonzero lambda for mode 1");
  if (dt <= 0.0) dt = 2.0 * std::numbers::pi / mode1.omega / 200.0;

  auto n_of = [&](double amp) {
    drive.amplitude = amp;
    return run_mode1_only(drive, mode1, t_target, dt);
  };
  DriveCalibration cal;
  double lo = 0.0, hi = 1.0;
  double n_hi = n_of(hi);
  while (n_hi < n_target) {
    lo = hi;
    hi *= 2.0;
    n_hi = n_of(hi);
    if (++cal.iterations > 200) throw NumericalError("calibration could not bracket the target occupation");
  }
  double amp = hi, n = n_hi;
  for (int it = 0; it < 200 && std::abs(n - n_target) > 0.1 * tol; ++it, ++cal.iterations) {
    amp = 0.5 * (lo + hi);
    n = n_of(amp);
    (n < n_target ? lo : hi) = amp;
  }
  if (std::abs(n - n_target) > tol) {
    std::ostringstream msg;
    msg << "calibration stalled at n1 = " << n << " (target " << n_target << ")";
    throw NumericalError(msg.str());
  }
  cal.amplitude = amp;
  cal.n1 = n;
  return cal;
}

}  // namespace pdc
