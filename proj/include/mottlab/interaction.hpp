#pragma once

#include <limits>
#include <vector>

#include "mottlab/bands.hpp"
#include "mottlab/units.hpp"
#include "mottlab/wannier.hpp"

namespace mottlab {

/// Relative-motion ground branch of two contact-interacting atoms in an
/// isotropic harmonic trap. Energies in units of hbar*omega.
struct BuschSolution {
  double nu = 0.0;
  double E_rel = 1.5;    // 2 nu + 3/2
  double delta_E = 0.0;  // E_rel - 3/2
  double a_ratio = 0.0;
  double residual = 0.0;  // relative residual of the branch equation
};

/// Solves sqrt(2) Gamma(-nu) / Gamma(-nu - 1/2) = 1 / a_ratio on the
/// repulsive branch nu in [0, 1/2]. a_ratio = +inf is unitarity.
BuschSolution busch_energy(double a_ratio);

/// Relative residual of the branch equation in its pole-free form,
///   a sqrt(2) cos(pi nu) Gamma(nu + 3/2) = sin(pi nu) Gamma(nu + 1).
double busch_residual(double nu, double a_ratio);

/// Harmonic-to-lattice rescaling data for one lattice depth. Everything
/// here is independent of the scattering length.
struct TrapRescaling {
  double V0 = 0.0;
  double hbar_omega = 0.0;  // E_R, 2 sqrt(V0)
  double k_a_ho = 0.0;      // k * sqrt(hbar / (m omega)) = V0^(-1/4)
  double overlap = 0.0;     // lattice 1D integral of |w|^4
  double ratio = 0.0;       // U_born_lattice / U_born_harmonic
  double gap = 0.0;         // band gap used by the three-body formula
  GapMode gap_mode = GapMode::Harmonic;
  double J = 0.0;           // bandwidth tunneling, carried for convenience
};

TrapRescaling make_rescaling(const LatticeSite& site, GapMode gap_mode,
                             const UnitSystem& units);

/// Born shift of the lowest harmonic level, sqrt(2/pi) hbar omega a / a_ho.
double u_born_harmonic(const TrapRescaling& r, double a_s_a0,
                       const UnitSystem& units);
double u_born_lattice(const TrapRescaling& r, double a_s_a0,
                      const UnitSystem& units);

/// Regularized two-body on-site energy U(2) in E_R.
double u2_lattice(const TrapRescaling& r, double a_s_a0,
                  const UnitSystem& units);
double u2_lattice(double V0, double a_s_a0, const UnitSystem& units);

struct ThreeBody {
  double combination = 0.0;  // 3U(3) - 2U(2)
  double u3 = 0.0;
};

ThreeBody u3_combination(double u2, double gap);

struct ResonancePredictions {
  double R2 = 0.0;       // U(2)
  double R1 = 0.0;       // 3U(3) - 2U(2)
  double R1_pert = 0.0;  // second-order expansion of R1
  double edge = 0.0;     // 3U(3) - U(2)
  double half = 0.0;     // U(2)/2
  double U1 = 0.0;
  double twoU1 = 0.0;
};

ResonancePredictions resonance_predictions(const TrapRescaling& r,
                                           double a_s_a0,
                                           const UnitSystem& units);
ResonancePredictions to_khz(const ResonancePredictions& p,
                            const UnitSystem& units);

enum class UModel { Born, Regularized };
UModel parse_u_model(const std::string& s);

/// Total on-site energy of n atoms, indexed by n. Entries 0 and 1 are zero.
struct InteractionLadder {
  std::vector<double> energies;
  bool regularized = false;
  double V0 = 0.0;
  double a_s = 0.0;
  GapMode gap_mode = GapMode::Harmonic;

  int max_occupation() const {
    return static_cast<int>(energies.size()) - 1;
  }
  double E(int n) const { return energies.at(n); }
};

/// Standard BH ladder E_n = U n(n-1)/2 up to n_max.
InteractionLadder uniform_ladder(double U, int n_max);

/// Ladder from the lattice: Born gives U1 n(n-1)/2, regularized gives
/// E2 = U(2) and E3 = 3U(3). Extra entries, if given, extend it to n > 3.
InteractionLadder lattice_ladder(const TrapRescaling& r, double a_s_a0,
                                 UModel model, const UnitSystem& units,
                                 int n_max = 3,
                                 const std::vector<double>& extra = {});

}  // namespace mottlab
