#pragma once

#include <Eigen/Core>
#include <vector>

namespace mottlab {

/// Single-particle lattice V(x) = V0 sin^2(kx). Depth in E_R.
struct LatticeConfig {
  double depth_ER = 0.0;
  double wavelength = 1064.5e-9;
  int planewave_cutoff = 41;  // odd
  int q_grid = 101;           // odd, endpoints q = +-k included

  void validate() const;
};

/// Bloch spectrum of the 1D lattice on a symmetric quasimomentum grid.
/// Quasimomenta are stored as q/k in [-1, 1]; energies in E_R.
class BandStructure {
 public:
  const LatticeConfig& config() const { return cfg_; }
  int n_bands() const { return static_cast<int>(energies_.size()); }
  int n_q() const { return static_cast<int>(q_.size()); }
  const std::vector<double>& q() const { return q_; }
  double energy(int band, int iq) const { return energies_[band][iq]; }
  const std::vector<double>& band(int b) const { return energies_[b]; }
  /// Plane-wave amplitudes c_l for l = -(c-1)/2 .. (c-1)/2.
  const Eigen::VectorXd& coefficients(int band, int iq) const {
    return coeffs_[band][iq];
  }
  int q_zero_index() const { return n_q() / 2; }

 private:
  friend BandStructure solve_bands(const LatticeConfig&, int);
  LatticeConfig cfg_;
  std::vector<double> q_;
  std::vector<std::vector<double>> energies_;
  std::vector<std::vector<Eigen::VectorXd>> coeffs_;
};

BandStructure solve_bands(const LatticeConfig& cfg, int n_bands);

/// Lowest-band tunneling from the bandwidth, (E0(k) - E0(0)) / 4.
double tunneling_J(const BandStructure& bs);

enum class GapMode { Harmonic, ZoneCenter, ZoneMean };

GapMode parse_gap_mode(const std::string& s);
const char* gap_mode_name(GapMode m);

/// Separation of the two lowest bands, in E_R.
double band_gap(const BandStructure& bs, GapMode mode);

/// 2 sqrt(V0) E_R, the harmonic site frequency.
double harmonic_frequency(double depth_ER);

}  // namespace mottlab
