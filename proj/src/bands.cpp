#include "mottlab/bands.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <string>

#include "mottlab/errors.hpp"

namespace mottlab {

void LatticeConfig::validate() const {
  require(std::isfinite(depth_ER) && depth_ER >= 0 && depth_ER <= 50,
          "lattice depth must lie in [0, 50] E_R");
  require(wavelength > 0, "wavelength must be positive");
  require(planewave_cutoff >= 11 && planewave_cutoff % 2 == 1,
          "planewave cutoff must be odd and >= 11");
  require(q_grid >= 21 && q_grid % 2 == 1, "q grid must be odd and >= 21");
}

BandStructure solve_bands(const LatticeConfig& cfg, int n_bands) {
  cfg.validate();
  const int c = cfg.planewave_cutoff;
  const int lmax = (c - 1) / 2;
  require(n_bands >= 1 && n_bands <= lmax,
          "n_bands must be in [1, (cutoff-1)/2]");

  BandStructure bs;
  bs.cfg_ = cfg;
  const int nq = cfg.q_grid;
  bs.q_.resize(nq);
  for (int i = 0; i < nq; ++i) {
    // Exactly antisymmetric about the center.
    bs.q_[i] = static_cast<double>(2 * i - (nq - 1)) / (nq - 1);
  }
  bs.energies_.assign(n_bands, std::vector<double>(nq));
  bs.coeffs_.assign(n_bands, std::vector<Eigen::VectorXd>(nq));

  const double v0 = cfg.depth_ER;
  Eigen::VectorXd diag(c);
  Eigen::VectorXd off = Eigen::VectorXd::Constant(c - 1, -v0 / 4.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (int iq = 0; iq < nq; ++iq) {
    const double q = bs.q_[iq];
    for (int j = 0; j < c; ++j) {
      const double kin = 2.0 * (j - lmax) + q;
      diag[j] = kin * kin + v0 / 2.0;
    }
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
      // The implicit QL stalls on some exactly parity-degenerate q = 0
      // matrices; the dense path reduces them differently.
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(c, c);
      h.diagonal() = diag;
      h.diagonal(1) = off;
      h.diagonal(-1) = off;
      solver.compute(h, Eigen::ComputeEigenvectors);
    }
    if (solver.info() != Eigen::Success) {
      fail(ErrorKind::Numerical,
           "band eigensolver did not converge at V0 = " + std::to_string(v0) +
               ", q index " + std::to_string(iq));
    }
    for (int b = 0; b < n_bands; ++b) {
      bs.energies_[b][iq] = solver.eigenvalues()[b];
      Eigen::VectorXd v = solver.eigenvectors().col(b);
      v.normalize();
      // Sign convention: Bloch function real and positive at x = 0 when
      // possible, otherwise positive slope there.
      double at_origin = v.sum();
      if (std::abs(at_origin) < 1e-12) {
        at_origin = 0.0;
        for (int j = 0; j < c; ++j) at_origin += (2.0 * (j - lmax) + q) * v[j];
      }
      if (at_origin < 0) v = -v;
      bs.coeffs_[b][iq] = std::move(v);
    }
  }
  return bs;
}

double tunneling_J(const BandStructure& bs) {
  require(bs.n_bands() >= 1, "lowest band required");
  const double edge = bs.energy(0, bs.n_q() - 1);
  const double center = bs.energy(0, bs.q_zero_index());
  return std::max(0.0, (edge - center) / 4.0);
}

GapMode parse_gap_mode(const std::string& s) {
  if (s == "harmonic") return GapMode::Harmonic;
  if (s == "q0") return GapMode::ZoneCenter;
  if (s == "bz_mean") return GapMode::ZoneMean;
  fail(ErrorKind::InvalidParameter, "unknown gap mode '" + s + "'");
}

const char* gap_mode_name(GapMode m) {
  switch (m) {
    case GapMode::Harmonic: return "harmonic";
    case GapMode::ZoneCenter: return "q0";
    case GapMode::ZoneMean: return "bz_mean";
  }
  return "?";
}

double harmonic_frequency(double depth_ER) {
  return 2.0 * std::sqrt(depth_ER);
}

double band_gap(const BandStructure& bs, GapMode mode) {
  if (bs.n_bands() < 2) {
    fail(ErrorKind::InvalidParameter, "band gap needs at least two bands");
  }
  switch (mode) {
    case GapMode::Harmonic:
      return harmonic_frequency(bs.config().depth_ER);
    case GapMode::ZoneCenter: {
      const int i0 = bs.q_zero_index();
      return bs.energy(1, i0) - bs.energy(0, i0);
    }
    case GapMode::ZoneMean: {
      double sum = 0.0;
      for (int i = 0; i < bs.n_q(); ++i) sum += bs.energy(1, i) - bs.energy(0, i);
      return sum / bs.n_q();
    }
  }
  return 0.0;
}

}  // namespace mottlab
