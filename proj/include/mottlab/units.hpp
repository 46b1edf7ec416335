#pragma once

#include <numbers>
#include <string_view>

namespace mottlab {

/// CODATA-2018 constants plus the species mass. All values in SI.
struct PhysicalConstants {
  double planck_h = 6.62607015e-34;
  double hbar = 6.62607015e-34 / (2.0 * std::numbers::pi);
  double atomic_mass_unit = 1.66053906660e-27;
  double bohr_radius_a0 = 5.29177210903e-11;
  double species_mass = 132.905451931 * 1.66053906660e-27;  // 133Cs

  /// Returns a copy with hbar recomputed from planck_h.
  PhysicalConstants with_planck(double h) const;
  void validate() const;
};

/// Lattice-derived scales. Internally energies are carried in E_R and
/// lengths in units of 1/k; this is the only place SI enters.
struct UnitSystem {
  PhysicalConstants constants;
  double wavelength = 0.0;        // m
  double recoil_energy_ER = 0.0;  // J
  double lattice_wavevector_k = 0.0;  // 1/m
  double lattice_spacing_d = 0.0;     // m
  double recoil_frequency_Hz = 0.0;   // E_R / h

  double er_to_khz(double e) const { return e * recoil_frequency_Hz * 1e-3; }
  double khz_to_er(double f) const { return f * 1e3 / recoil_frequency_Hz; }
  /// Scattering length in a0 to dimensionless k*a.
  double a0_to_ka(double a) const {
    return a * constants.bohr_radius_a0 * lattice_wavevector_k;
  }
};

UnitSystem make_units(double wavelength, double species_mass,
                      const PhysicalConstants& constants = {});

/// 1064.5 nm lattice with 133Cs.
UnitSystem default_units();

enum class Unit { RecoilEnergy, Hz, kHz, Joule, BohrRadius, Meter, InverseK };

Unit parse_unit(std::string_view name);
std::string_view unit_name(Unit u);

/// Exact linear conversion between units of the same dimension.
double convert(double value, Unit from, Unit to, const UnitSystem& units);

}  // namespace mottlab
