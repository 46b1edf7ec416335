#pragma once

#include <vector>

#include "mottlab/bands.hpp"
#include "mottlab/units.hpp"

namespace mottlab {

struct WannierGrid {
  int intervals = 2048;  // grid has intervals + 1 points, centered on x = 0
  int sites = 5;         // total span in lattice sites
};

/// Lowest-band Wannier function on a real-space grid in units of 1/k.
struct WannierFunction {
  std::vector<double> x;
  std::vector<double> amplitude;
  double spacing = 0.0;
  double norm = 0.0;  // trapezoid integral of |w|^2 after normalization

  /// max |w(x) - w(-x)|
  double parity_residual() const;
  /// |w(edge)| / |w(0)|
  double edge_ratio() const;
  /// Dimensionless on-site overlap, integral of |w|^4 dx in 1/k units.
  double overlap_integral() const;
};

WannierFunction wannier(const BandStructure& bs, const WannierGrid& grid = {});

/// Born-approximation on-site energy for the separable cubic lattice, in E_R.
/// Takes the 1D overlap integral so callers can reuse one Wannier function.
double u_born_from_overlap(double overlap_1d, double a_s_a0,
                           const UnitSystem& units);
double u_born(const WannierFunction& w, double a_s_a0, const UnitSystem& units);

/// Nearest-neighbor Fourier component of the lowest band, |J|, in E_R.
double j_overlap(const BandStructure& bs, const WannierFunction& w);

struct HubbardParams {
  double J = 0.0;        // E_R, from the bandwidth
  double U1_born = 0.0;  // E_R
  double V0 = 0.0;       // E_R
  double a_s = 0.0;      // a0
};

/// Everything the on-site calculations need from one lattice depth.
struct LatticeSite {
  double V0 = 0.0;
  double J = 0.0;          // bandwidth estimate
  double J_fourier = 0.0;  // nearest-neighbor Fourier component
  double overlap = 0.0;    // 1D integral of |w|^4
  double gap_harmonic = 0.0;
  double gap_q0 = 0.0;
  double gap_bz_mean = 0.0;

  double gap(GapMode mode) const;
};

struct LatticeNumerics {
  int planewave_cutoff = 41;
  int q_grid = 101;
  WannierGrid grid;
};

LatticeSite analyze_site(double V0, const UnitSystem& units,
                         const LatticeNumerics& numerics = {});

HubbardParams hubbard_params(const LatticeSite& site, double a_s_a0,
                             const UnitSystem& units);

}  // namespace mottlab
