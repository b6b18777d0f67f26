#pragma once

// Maxwell-Schroedinger mean field: one matter wavefunction evolving under
//
//   H_MS(q) = h_el - sum_a lambda_a q_a (e_a . P)
//
// with classical mode coordinates obeying q'' + w^2 q = j,
//
//   j_a = lambda_a <e_a . P> - lambda_a sum_b lambda_b (e_a . e_b) q_b  [- lambda_1 j_ext(t) for a = 1].
//
// Strang splitting: half drift of q, exact flow of (matter, p) at frozen q,
// half drift. In the eigenbasis the middle flow is solved in closed form; the
// grid mode uses a Krylov step and a trapezoidal momentum kick.

#include <memory>
#include <optional>
#include <vector>

#include "pdcqed/drive.hpp"
#include "pdcqed/matter.hpp"
#include "pdcqed/observables.hpp"
#include "pdcqed/photon.hpp"

namespace pdc {

struct MeanFieldState {
  CVector matter;  // eigenbasis coefficients, or grid values scaled by sqrt(dx dy)
  std::vector<double> q, p;
  double time = 0.0;
};

struct MeanFieldParams {
  MatterOperators matter;
  std::vector<FockMode> modes;
  DriveSpec drive;  // kNone or kClassicalCurrent on the mode labelled 1

  void validate() const;
};

// Grid validation mode: same coefficients, matter on the finite-difference grid.
struct GridMeanFieldParams {
  std::shared_ptr<const SparseHermitianOp> h_grid;
  SparseMatrix px, py;  // -i d/dx, -i d/dy
  std::vector<FockMode> modes;
  DriveSpec drive;
  KrylovOptions krylov{40, 1e-12, 1e-8};
};

// Classical image of coherent amplitudes: q = sqrt(2/w) Re xi, p = sqrt(2w) Im xi,
// so that the occupation (p^2 + w^2 q^2) / 2w equals |xi|^2.
MeanFieldState mf_initial_state(const CVector& matter, const std::vector<FockMode>& modes,
                                const std::vector<cplx>& xi);

// <e . P> for each mode polarization.
std::vector<double> mf_momentum_projections(const MeanFieldState& s, const MeanFieldParams& par);
// j_a without the external current.
std::vector<double> mf_currents(const MeanFieldState& s, const MeanFieldParams& par);
// <h_el> - sum lambda q <e.P> + |sum lambda q e|^2 / 2 + sum (p^2 + w^2 q^2) / 2.
double mf_energy(const MeanFieldState& s, const MeanFieldParams& par);

void ms_step(MeanFieldState& s, const MeanFieldParams& par, double dt);
void ms_step_grid(MeanFieldState& s, const GridMeanFieldParams& par, double dt);
double mf_energy_grid(const MeanFieldState& s, const GridMeanFieldParams& par);

struct MeanFieldSnapshot {
  std::vector<double> n, H;
  std::vector<Sample> Q;
  std::vector<Sample> g2;  // pairs (0,1), (0,2), (1,2), ... in order
};

// n = H/w - 1/2 with H = (p^2 + w^2 q^2)/2 + w/2; Q = 0 and g2 = 1 wherever the
// occupations clear the floor, undefined otherwise.
MeanFieldSnapshot mf_observables(const MeanFieldState& s, const std::vector<FockMode>& modes);

struct MeanFieldRun {
  double dt = 0.0;
  double t_end = 0.0;
  int record_stride = 1;
};

struct MeanFieldResult {
  ObservableSeries series;
  std::vector<std::vector<double>> q_history;  // per recorded time
  double max_norm_defect = 0.0;
  MeanFieldState final_state;
};

MeanFieldResult run_meanfield(const MeanFieldParams& par, MeanFieldState s, const MeanFieldRun& run);

}  // namespace pdc
