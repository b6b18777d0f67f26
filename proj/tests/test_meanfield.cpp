#include "doctest.h"
#include "pdcqed/errors.hpp"
#include "pdcqed/meanfield.hpp"
#include "pdcqed/units.hpp"
#include "synthetic.hpp"

#include <cmath>

using namespace pdc;
using namespace pdc::testing;

namespace {

CVector e(int n, int k) {
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return v;
}

MeanFieldParams three_level(double lambda) {
  MeanFieldParams par;
  par.matter = synthetic_matter(3, 2, {0.0, 1.0, 1.05});
  par.modes = {make_mode(1, 1.0, 10, lambda, {0.6, 0.8}), make_mode(2, 0.5, 10, lambda, {0.0, 1.0})};
  return par;
}

}  // namespace

TEST_CASE("initial classical image carries |xi|^2 quanta") {
  const auto par = three_level(0.1);
  const auto s = mf_initial_state(e(3, 0), par.modes, {{1.5, 0.5}, 0.0});
  const auto obs = mf_observables(s, par.modes);
  CHECK(obs.n[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(obs.n[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(obs.H[0] == doctest::Approx(1.0 * 3.0));
  CHECK(*obs.Q[0] == 0.0);
  CHECK(!obs.Q[1].has_value());
  CHECK(!obs.g2[0].has_value());
}

TEST_CASE("energy functional is conserved by the split step") {
  const auto par = three_level(0.15);
  auto s = mf_initial_state(e(3, 0), par.modes, {2.0, 0.0});
  const double e0 = mf_energy(s, par);
  double worst = 0.0;
  for (int k = 0; k < 20000; ++k) {
    ms_step(s, par, 0.01);
    if (k % 100 == 0) worst = std::max(worst, std::abs(mf_energy(s, par) - e0));
  }
  CHECK(worst < 1e-4 * std::abs(e0));
  CHECK(std::abs(s.matter.norm() - 1.0) < 1e-12);
  CHECK(s.time == doctest::Approx(200.0));
  // Halving the step cuts the energy error by about four.
  auto run = [&](double dt) {
    auto x = mf_initial_state(e(3, 0), par.modes, {2.0, 0.0});
    for (int k = 0; k < int(20.0 / dt + 0.5); ++k) ms_step(x, par, dt);
    return std::abs(mf_energy(x, par) - e0);
  };
  const double r = run(0.04) / run(0.02);
  CHECK(r > 3.0);
  CHECK(r < 5.0);
}

TEST_CASE("zero coupling: free oscillators and stationary matter populations") {
  const auto par = three_level(0.0);
  CVector c = (e(3, 0) + e(3, 2)) / std::sqrt(2.0);
  auto s = mf_initial_state(c, par.modes, {{1.0, 0.3}, {-0.5, 0.2}});
  const auto q0 = s.q, p0 = s.p;
  const double dt = 0.002;
  for (int k = 0; k < 5000; ++k) ms_step(s, par, dt);
  const double t = s.time;
  for (std::size_t a = 0; a < 2; ++a) {
    const double w = par.modes[a].omega;
    CHECK(s.q[a] == doctest::Approx(q0[a] * std::cos(w * t) + p0[a] / w * std::sin(w * t)).epsilon(1e-5));
  }
  CHECK(std::norm(s.matter(0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::norm(s.matter(2)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(s.matter(2) / s.matter(0) - std::exp(cplx(0, -1.05 * t))) < 1e-10);
}

TEST_CASE("classical current matches the expectation of the coupling") {
  const auto par = three_level(0.2);
  CVector c = (e(3, 0) + cplx(0, 1) * e(3, 1)) / std::sqrt(2.0);
  auto s = mf_initial_state(c, par.modes, {1.0, 0.5});
  const auto proj = mf_momentum_projections(s, par);
  const auto j = mf_currents(s, par);
  for (std::size_t a = 0; a < 2; ++a) {
    const auto& m = par.modes[a];
    const CMatrix ep = m.polarization[0] * par.matter.px + m.polarization[1] * par.matter.py;
    CHECK(proj[a] == doctest::Approx(c.dot(ep * c).real()));
    double dia = 0.0;
    for (std::size_t b = 0; b < 2; ++b) dia += par.modes[b].lambda * dot(m.polarization, par.modes[b].polarization) * s.q[b];
    CHECK(j[a] == doctest::Approx(m.lambda * proj[a] - m.lambda * dia));
  }
}

TEST_CASE("mean-field run: Q is zero, P and gamma are undefined") {
  auto par = three_level(0.1);
  const auto s = mf_initial_state(e(3, 0), par.modes, {2.0, 0.0});
  const auto res = run_meanfield(par, s, {0.01, 5.0, 10});
  const auto& ser = res.series;
  CHECK(ser.method == "mean_field");
  CHECK(ser.times.size() == 51);
  for (const auto& m : ser.modes)
    for (std::size_t t = 0; t < ser.times.size(); ++t) {
      if (m.Q[t]) CHECK(*m.Q[t] == 0.0);
      CHECK(!m.P[0][t].has_value());
      CHECK(!m.gamma[t].has_value());
    }
  CHECK(res.q_history.size() == ser.times.size());
  CHECK(res.max_norm_defect < 1e-12);
}

TEST_CASE("current drive pumps the classical mode like a forced oscillator") {
  auto par = three_level(0.0);
  par.modes[0].lambda = 0.3;
  par.matter.px.setZero();
  par.matter.py.setZero();
  par.drive.kind = DriveKind::kClassicalCurrent;
  par.drive.amplitude = 1.5;
  par.drive.t0 = 4.0;
  par.drive.tau = 1.5;
  par.drive.omega = 1.0;
  auto s = mf_initial_state(e(3, 0), par.modes, {0.0, 0.0});
  // Without matter the only other force is the diamagnetic self term lambda^2 q.
  FockMode shifted = par.modes[0];
  shifted.omega = std::sqrt(1.0 + 0.09);
  DriveSpec d = par.drive;
  std::vector<double> fine;
  for (int k = 0; k <= 8000; ++k) fine.push_back(k * 0.001);
  const auto ref = classical_pump_field(d, shifted, fine);
  for (int k = 0; k < 8000; ++k) ms_step(s, par, 0.001);
  CHECK(s.q[0] == doctest::Approx(ref.back()).epsilon(1e-4));
  MeanFieldParams bad = par;
  bad.drive.kind = DriveKind::kClassicalField;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

namespace {

// Largest |q_eig - q_grid| over the run and the largest |q| seen.
std::pair<double, double> grid_vs_eigen(int n_states) {
  const double dt = 0.02;
  GridSpec g;
  g.nx = g.ny = 41;
  g.dx = g.dy = length_to_eff(2.2);
  const auto mm = solve_ring(ring_potential_meV(200.0), n_states, {}, g);
  MeanFieldParams par;
  par.matter = mm.ops;
  const double w = (mm.ops.h_el(1, 1) - mm.ops.h_el(0, 0)).real();
  par.modes = {make_mode(1, w, 10, 0.02, {1.0, 0.0})};
  GridMeanFieldParams gp;
  gp.h_grid = std::make_shared<SparseHermitianOp>(build_ring_hamiltonian(g, mm.potential));
  gp.px = derivative_matrix(g, 0).scaled({0.0, -1.0});
  gp.py = derivative_matrix(g, 1).scaled({0.0, -1.0});
  gp.modes = par.modes;
  auto se = mf_initial_state(e(static_cast<int>(mm.ops.size()), 0), par.modes, {2.0});
  auto sg = mf_initial_state(mm.basis.states.col(0) * std::sqrt(g.dx * g.dy), par.modes, {2.0});
  CHECK(mf_energy_grid(sg, gp) == doctest::Approx(mf_energy(se, par)).epsilon(1e-8));
  double dq = 0.0, scale = 0.0;
  const int steps = static_cast<int>(std::lround(60.0 / dt));
  for (int k = 0; k < steps; ++k) {
    ms_step(se, par, dt);
    ms_step_grid(sg, gp, dt);
    dq = std::max(dq, std::abs(se.q[0] - sg.q[0]));
    scale = std::max(scale, std::abs(se.q[0]));
  }
  CHECK(std::abs(sg.matter.norm() - 1.0) < 1e-10);
  return {dq, scale};
}

}  // namespace

TEST_CASE("grid and eigenbasis mean field agree for a weakly coupled ring") {
  const auto [dq12, scale] = grid_vs_eigen(12);
  const auto dq20 = grid_vs_eigen(20).first;
  // The eigenbasis is a truncation of the grid: the gap is small and shrinks with more levels.
  CHECK(dq12 < 1e-2 * scale);
  CHECK(dq20 < 0.85 * dq12);
}
