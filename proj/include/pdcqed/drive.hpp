#pragma once

// External pumping of mode 1: either a classical current coupled to the
// quantized mode, or a prescribed classical field replacing the mode.

#include <vector>

#include "pdcqed/hamiltonian.hpp"

namespace pdc {

enum class DriveKind { kNone, kClassicalField, kClassicalCurrent };

struct DriveSpec {
  DriveKind kind = DriveKind::kNone;
  double amplitude = 0.0;  // j1, eff. units
  double t0 = 0.0;         // envelope centre
  double tau = 0.0;        // envelope width
  double omega = 0.0;      // carrier
  double q0 = 0.0;         // homogeneous part of the classical field
  double qdot0 = 0.0;

  void validate() const;
  // j1 exp(-(t - t0)^2 / tau^2) sin(omega t)
  double current(double t) const;
};

// q1(t) = q0 cos(w t) + (qdot0/w) sin(w t) - (lambda/w) int_0^t sin(w (t - t')) j(t') dt'
// by cumulative trapezoid on the supplied grid (which must start at 0 or later
// and be increasing). Second order in the grid spacing.
std::vector<double> classical_pump_field(const DriveSpec& drive, const FockMode& mode1, const std::vector<double>& t_grid);

// Tabulated pump field on a uniform grid with linear interpolation.
class PumpField {
 public:
  PumpField(const DriveSpec& drive, const FockMode& mode1, double t_end, double spacing);
  double q(double t) const;
  double vector_potential(double t) const { return lambda_ * q(t); }

 private:
  double lambda_ = 0.0;
  double h_ = 0.0;
  std::vector<double> q_;
};

// Adds the drive to `model`.
// Current drive: + lambda1 j(t) q1, mode 1 must be in the basis.
// Field drive:   A1(t) [ -(e1.P) + sum_b lambda_b (e1.e_b) q_b ] + A1(t)^2 / 2, with A1 = lambda1 q1(t);
//                mode 1 must not be in the basis.
void attach_drive(HamiltonianModel& model, const DriveSpec& drive, const CoupledBasis& basis,
                  const MatterOperators& matter, const FockMode& mode1, double t_end, double dt,
                  const SampledBath* bath = nullptr);

struct DriveCalibration {
  double amplitude = 0.0;
  double n1 = 0.0;
  int iterations = 0;
};

// Bisection on j1 until a mode-1-only quantum run started in vacuum reaches
// n1(t_target) = n_target within tol.
DriveCalibration calibrate_current_drive(DriveSpec drive, const FockMode& mode1, double t_target, double n_target = 4.0,
                                         double tol = 0.05, double dt = 0.0);

}  // namespace pdc
