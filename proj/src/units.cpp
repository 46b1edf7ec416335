#include "mottlab/units.hpp"

#include <cmath>
#include <string>

#include "mottlab/errors.hpp"

namespace mottlab {

PhysicalConstants PhysicalConstants::with_planck(double h) const {
  PhysicalConstants c = *this;
  c.planck_h = h;
  c.hbar = h / (2.0 * std::numbers::pi);
  return c;
}

void PhysicalConstants::validate() const {
  require(planck_h > 0 && hbar > 0 && atomic_mass_unit > 0 &&
              bohr_radius_a0 > 0 && species_mass > 0,
          "physical constants must be strictly positive");
}

UnitSystem make_units(double wavelength, double species_mass,
                      const PhysicalConstants& constants) {
  require(std::isfinite(wavelength) && wavelength > 0,
          "wavelength must be positive");
  require(std::isfinite(species_mass) && species_mass > 0,
          "species mass must be positive");
  UnitSystem u;
  u.constants = constants;
  u.constants.species_mass = species_mass;
  u.constants.validate();
  const double h = u.constants.planck_h;
  u.wavelength = wavelength;
  u.recoil_energy_ER = h * h / (2.0 * species_mass * wavelength * wavelength);
  u.lattice_wavevector_k = 2.0 * std::numbers::pi / wavelength;
  u.lattice_spacing_d = wavelength / 2.0;
  u.recoil_frequency_Hz = u.recoil_energy_ER / h;
  return u;
}

UnitSystem default_units() {
  PhysicalConstants c;
  return make_units(1064.5e-9, c.species_mass, c);
}

namespace {

enum class Dimension { Energy, Length };

Dimension dimension_of(Unit u) {
  switch (u) {
    case Unit::RecoilEnergy:
    case Unit::Hz:
    case Unit::kHz:
    case Unit::Joule:
      return Dimension::Energy;
    default:
      return Dimension::Length;
  }
}

// Factor taking one of `u` to the canonical unit of its dimension
// (E_R for energy, 1/k for length).
double to_canonical(Unit u, const UnitSystem& s) {
  switch (u) {
    case Unit::RecoilEnergy: return 1.0;
    case Unit::Hz: return 1.0 / s.recoil_frequency_Hz;
    case Unit::kHz: return 1e3 / s.recoil_frequency_Hz;
    case Unit::Joule: return 1.0 / s.recoil_energy_ER;
    case Unit::InverseK: return 1.0;
    case Unit::Meter: return s.lattice_wavevector_k;
    case Unit::BohrRadius:
      return s.constants.bohr_radius_a0 * s.lattice_wavevector_k;
  }
  return 1.0;
}

}  // namespace

Unit parse_unit(std::string_view name) {
  if (name == "E_R" || name == "ER") return Unit::RecoilEnergy;
  if (name == "Hz") return Unit::Hz;
  if (name == "kHz") return Unit::kHz;
  if (name == "J" || name == "Joule") return Unit::Joule;
  if (name == "a0" || name == "a_0") return Unit::BohrRadius;
  if (name == "m" || name == "meter") return Unit::Meter;
  if (name == "1/k" || name == "inv_k") return Unit::InverseK;
  fail(ErrorKind::Unit, "unknown unit '" + std::string(name) + "'");
}

std::string_view unit_name(Unit u) {
  switch (u) {
    case Unit::RecoilEnergy: return "E_R";
    case Unit::Hz: return "Hz";
    case Unit::kHz: return "kHz";
    case Unit::Joule: return "J";
    case Unit::BohrRadius: return "a0";
    case Unit::Meter: return "m";
    case Unit::InverseK: return "1/k";
  }
  return "?";
}

double convert(double value, Unit from, Unit to, const UnitSystem& units) {
  if (dimension_of(from) != dimension_of(to)) {
    fail(ErrorKind::Unit, "cannot convert " + std::string(unit_name(from)) +
                              " to " + std::string(unit_name(to)));
  }
  if (from == to) return value;
  return value * to_canonical(from, units) / to_canonical(to, units);
}

}  // namespace mottlab
