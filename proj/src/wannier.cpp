#include "mottlab/wannier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mottlab/errors.hpp"

namespace mottlab {

namespace {

// Trapezoid weights over the inclusive symmetric q grid, summing to one.
std::vector<double> zone_weights(int nq) {
  std::vector<double> w(nq, 1.0 / (nq - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (double v : f) s += v;
  s -= 0.5 * (f.front() + f.back());
  return s * h;
}

}  // namespace

double WannierFunction::parity_residual() const {
  double r = 0.0;
  const std::size_t n = amplitude.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    r = std::max(r, std::abs(amplitude[i] - amplitude[n - 1 - i]));
  }
  return r;
}

double WannierFunction::edge_ratio() const {
  const double center = std::abs(amplitude[amplitude.size() / 2]);
  const double edge = std::max(std::abs(amplitude.front()),
                               std::abs(amplitude.back()));
  return edge / center;
}

double WannierFunction::overlap_integral() const {
  std::vector<double> f(amplitude.size());
  std::transform(amplitude.begin(), amplitude.end(), f.begin(),
                 [](double v) { return v * v * v * v; });
  return trapezoid(f, spacing);
}

WannierFunction wannier(const BandStructure& bs, const WannierGrid& grid) {
  require(bs.n_bands() >= 1, "lowest band required");
  require(grid.intervals >= 16 && grid.intervals % 2 == 0,
          "wannier grid needs an even number of intervals >= 16");
  require(grid.sites >= 1, "wannier grid must span at least one site");

  const int n = grid.intervals + 1;
  const double half_span = 0.5 * grid.sites * std::numbers::pi;
  WannierFunction w;
  w.spacing = 2.0 * half_span / grid.intervals;
  w.x.resize(n);
  for (int i = 0; i < n; ++i) w.x[i] = (i - grid.intervals / 2) * w.spacing;
  w.amplitude.assign(n, 0.0);

  const int nq = bs.n_q();
  const int c = bs.config().planewave_cutoff;
  const int lmax = (c - 1) / 2;
  const auto weights = zone_weights(nq);

  std::vector<std::complex<double>> acc(n);
  for (int iq = 0; iq < nq; ++iq) {
    const Eigen::VectorXd& coef = bs.coefficients(0, iq);
    const double at_origin = coef.sum();
    if (std::abs(at_origin) < 1e-10) {
      fail(ErrorKind::Numerical,
           "Bloch function vanishes at the site center for q index " +
               std::to_string(iq) + " (gauge singularity)");
    }
    const double sign = at_origin > 0 ? 1.0 : -1.0;
    const double q = bs.q()[iq];
    for (int j = 0; j < c; ++j) {
      const double a = sign * weights[iq] * coef[j];
      if (std::abs(a) < 1e-18) continue;
      const double kappa = 2.0 * (j - lmax) + q;
      // Phasor recurrence from the left edge; restarted at the center to
      // keep the accumulated rounding symmetric.
      const std::complex<double> step = std::polar(1.0, kappa * w.spacing);
      std::complex<double> ph = std::polar(a, kappa * w.x[0]);
      const int mid = n / 2;
      for (int i = 0; i < mid; ++i) {
        w.amplitude[i] += ph.real();
        ph *= step;
      }
      ph = std::complex<double>(a, 0.0);
      for (int i = mid; i < n; ++i) {
        w.amplitude[i] += ph.real();
        ph *= step;
      }
    }
  }

  std::vector<double> sq(n);
  std::transform(w.amplitude.begin(), w.amplitude.end(), sq.begin(),
                 [](double v) { return v * v; });
  const double norm = trapezoid(sq, w.spacing);
  const double scale = 1.0 / std::sqrt(norm);
  for (double& v : w.amplitude) v *= scale;
  for (double& v : sq) v *= scale * scale;
  w.norm = trapezoid(sq, w.spacing);
  return w;
}

double u_born_from_overlap(double overlap_1d, double a_s_a0,
                           const UnitSystem& units) {
  if (a_s_a0 < 0) {
    fail(ErrorKind::UnsupportedBranch,
         "negative scattering length is not supported");
  }
  const double ka = units.a0_to_ka(a_s_a0);
  return 8.0 * std::numbers::pi * ka * overlap_1d * overlap_1d * overlap_1d;
}

double u_born(const WannierFunction& w, double a_s_a0,
              const UnitSystem& units) {
  return u_born_from_overlap(w.overlap_integral(), a_s_a0, units);
}

double j_overlap(const BandStructure& bs, const WannierFunction&) {
  const auto weights = zone_weights(bs.n_q());
  double s = 0.0;
  for (int i = 0; i < bs.n_q(); ++i) {
    // q d = pi q/k
    s += weights[i] * bs.energy(0, i) * std::cos(std::numbers::pi * bs.q()[i]);
  }
  return std::abs(-s);
}

double LatticeSite::gap(GapMode mode) const {
  switch (mode) {
    case GapMode::Harmonic: return gap_harmonic;
    case GapMode::ZoneCenter: return gap_q0;
    case GapMode::ZoneMean: return gap_bz_mean;
  }
  return gap_harmonic;
}

LatticeSite analyze_site(double V0, const UnitSystem& units,
                         const LatticeNumerics& numerics) {
  LatticeConfig cfg;
  cfg.depth_ER = V0;
  cfg.wavelength = units.wavelength;
  cfg.planewave_cutoff = numerics.planewave_cutoff;
  cfg.q_grid = numerics.q_grid;
  const BandStructure bs = solve_bands(cfg, 2);
  const WannierFunction w = wannier(bs, numerics.grid);
  LatticeSite site;
  site.V0 = V0;
  site.J = tunneling_J(bs);
  site.J_fourier = j_overlap(bs, w);
  site.overlap = w.overlap_integral();
  site.gap_harmonic = band_gap(bs, GapMode::Harmonic);
  site.gap_q0 = band_gap(bs, GapMode::ZoneCenter);
  site.gap_bz_mean = band_gap(bs, GapMode::ZoneMean);
  return site;
}

HubbardParams hubbard_params(const LatticeSite& site, double a_s_a0,
                             const UnitSystem& units) {
  HubbardParams p;
  p.J = site.J;
  p.U1_born = u_born_from_overlap(site.overlap, a_s_a0, units);
  p.V0 = site.V0;
  p.a_s = a_s_a0;
  return p;
}

}  // namespace mottlab
