#pragma once

// Effective atomic units for a GaAs-like host: hbar = e = m* = 1, with the
// dielectric constant folded into the Hartree and the Bohr radius.

namespace pdc {

struct UnitSystem {
  double mass_eff = 0.067;
  double eps_rel = 12.7;
  double hartree_meV = 0.0;  // Ha* in meV
  double bohr_nm = 0.0;      // a_B* in nm
  double time_fs = 0.0;      // hbar / Ha* in fs
};

namespace constants {
inline constexpr double hartree_meV = 27211.386245988;
inline constexpr double bohr_nm = 0.0529177210903;
inline constexpr double hbar_meV_fs = 658.2119569509;
}  // namespace constants

UnitSystem make_units(double mass_eff, double eps_rel);
const UnitSystem& default_units();

double energy_to_eff(double meV, const UnitSystem& u = default_units());
double energy_from_eff(double e, const UnitSystem& u = default_units());
double length_to_eff(double nm, const UnitSystem& u = default_units());
double length_from_eff(double l, const UnitSystem& u = default_units());
double time_to_eff(double fs, const UnitSystem& u = default_units());
double time_from_eff(double t, const UnitSystem& u = default_units());
inline double ps_to_eff(double ps, const UnitSystem& u = default_units()) {
  return time_to_eff(1000.0 * ps, u);
}
inline double eff_to_ps(double t, const UnitSystem& u = default_units()) {
  return time_from_eff(t, u) / 1000.0;
}

// g = lambda / sqrt(2 omega), everything in effective units.
double effective_coupling(double lambda, double omega);

// Single-mode coupling of a planar cavity of length L (micrometres), Gaussian
// convention lambda = sqrt(8 pi / (eps_r L)) with L in a_B*.
double lambda_from_cavity_length(double length_um, const UnitSystem& u = default_units());

}  // namespace pdc
