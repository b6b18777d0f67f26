#include "pdcqed/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pdcqed/errors.hpp"

namespace pdc {

UnitSystem make_units(double mass_eff, double eps_rel) {
  if (!(mass_eff > 0.0) || !(eps_rel > 0.0))
    throw DomainError("unit system needs positive mass and dielectric constant");
  UnitSystem u;
  u.mass_eff = mass_eff;
  u.eps_rel = eps_rel;
  u.hartree_meV = constants::hartree_meV * mass_eff / (eps_rel * eps_rel);
  u.bohr_nm = constants::bohr_nm * eps_rel / mass_eff;
  u.time_fs = constants::hbar_meV_fs / u.hartree_meV;
  return u;
}

const UnitSystem& default_units() {
  static const UnitSystem u = make_units(0.067, 12.7);
  return u;
}

double energy_to_eff(double meV, const UnitSystem& u) { return meV / u.hartree_meV; }
double energy_from_eff(double e, const UnitSystem& u) { return e * u.hartree_meV; }
double length_to_eff(double nm, const UnitSystem& u) { return nm / u.bohr_nm; }
double length_from_eff(double l, const UnitSystem& u) { return l * u.bohr_nm; }
double time_to_eff(double fs, const UnitSystem& u) { return fs / u.time_fs; }
double time_from_eff(double t, const UnitSystem& u) { return t * u.time_fs; }

double effective_coupling(double lambda, double omega) {
  if (!(omega > 0.0))
    throw DomainError("effective_coupling: omega must be positive, got " + std::to_string(omega));
  return lambda / std::sqrt(2.0 * omega);
}

double lambda_from_cavity_length(double length_um, const UnitSystem& u) {
  if (!(length_um > 0.0)) throw DomainError("cavity length must be positive");
  const double length_eff = length_to_eff(1000.0 * length_um, u);
  return std::sqrt(8.0 * std::numbers::pi / (u.eps_rel * length_eff));
}

}  // namespace pdc
