#include "mottlab/interaction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mottlab/errors.hpp"

namespace mottlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThreeBodyCoefficient = 1.34;

// Both sides of the pole-free branch equation.
void branch_terms(double nu, double a_ratio, double& lhs, double& rhs) {
  lhs = a_ratio * std::numbers::sqrt2 * std::cos(kPi * nu) *
        std::tgamma(nu + 1.5);
  rhs = std::sin(kPi * nu) * std::tgamma(nu + 1.0);
}

}  // namespace

double busch_residual(double nu, double a_ratio) {
  if (std::isinf(a_ratio)) return std::abs(std::cos(kPi * nu));
  double lhs, rhs;
  branch_terms(nu, a_ratio, lhs, rhs);
  const double scale = std::abs(lhs) + std::abs(rhs);
  return scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
}

BuschSolution busch_energy(double a_ratio) {
  if (std::isnan(a_ratio)) {
    fail(ErrorKind::InvalidParameter, "a_ratio must not be NaN");
  }
  if (a_ratio < 0) {
    fail(ErrorKind::UnsupportedBranch,
         "attractive scattering lengths are not supported on the repulsive "
         "ground branch");
  }
  BuschSolution s;
  s.a_ratio = a_ratio;
  if (a_ratio == 0.0) return s;
  if (std::isinf(a_ratio)) {
    s.nu = 0.5;
  } else {
    // f(nu) = lhs - rhs is positive at nu = 0 and negative at nu = 1/2.
    auto f = [a_ratio](double nu) {
      double lhs, rhs;
      branch_terms(nu, a_ratio, lhs, rhs);
      return lhs - rhs;
    };
    double lo = 0.0, hi = 0.5;
    if (!(f(lo) > 0 && f(hi) < 0)) {
      fail(ErrorKind::Numerical, "branch root not bracketed");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (f(mid) > 0) lo = mid; else hi = mid;
    }
    s.nu = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  }
  s.E_rel = 2.0 * s.nu + 1.5;
  s.delta_E = 2.0 * s.nu;
  s.residual = busch_residual(s.nu, a_ratio);
  return s;
}

TrapRescaling make_rescaling(const LatticeSite& site, GapMode gap_mode,
                             const UnitSystem&) {
  require(site.V0 > 0, "rescaling needs a positive lattice depth");
  TrapRescaling r;
  r.V0 = site.V0;
  r.hbar_omega = harmonic_frequency(site.V0);
  r.k_a_ho = std::pow(site.V0, -0.25);
  r.overlap = site.overlap;
  // Both Born energies are linear in a_s; the ratio of their slopes.
  const double lattice_slope = 8.0 * kPi * std::pow(site.overlap, 3);
  const double harmonic_slope =
      std::sqrt(2.0 / kPi) * r.hbar_omega / r.k_a_ho;
  r.ratio = lattice_slope / harmonic_slope;
  r.gap_mode = gap_mode;
  r.gap = site.gap(gap_mode);
  r.J = site.J;
  return r;
}

double u_born_harmonic(const TrapRescaling& r, double a_s_a0,
                       const UnitSystem& units) {
  const double ka = units.a0_to_ka(a_s_a0);
  return std::sqrt(2.0 / kPi) * r.hbar_omega * ka / r.k_a_ho;
}

double u_born_lattice(const TrapRescaling& r, double a_s_a0,
                      const UnitSystem& units) {
  return u_born_from_overlap(r.overlap, a_s_a0, units);
}

double u2_lattice(const TrapRescaling& r, double a_s_a0,
                  const UnitSystem& units) {
  if (a_s_a0 < 0) {
    fail(ErrorKind::UnsupportedBranch,
         "negative scattering length is not supported");
  }
  // The branch equation is written in the oscillator length of a single
  // atom, a_ho = a_rel / sqrt(2).
  const double a_ratio = units.a0_to_ka(a_s_a0) / r.k_a_ho;
  const BuschSolution b = busch_energy(a_ratio);
  return b.delta_E * r.hbar_omega * r.ratio;
}

double u2_lattice(double V0, double a_s_a0, const UnitSystem& units) {
  require(V0 >= 5 && V0 <= 50, "u2_lattice needs V0 in [5, 50] E_R");
  const LatticeSite site = analyze_site(V0, units);
  return u2_lattice(make_rescaling(site, GapMode::Harmonic, units), a_s_a0,
                    units);
}

ThreeBody u3_combination(double u2, double gap) {
  require(gap > 0, "band gap must be positive");
  require(u2 >= 0, "U(2) must be non-negative");
  ThreeBody t;
  t.combination = u2 / (1.0 + kThreeBodyCoefficient * u2 / gap);
  t.u3 = (t.combination + 2.0 * u2) / 3.0;
  return t;
}

ResonancePredictions resonance_predictions(const TrapRescaling& r,
                                           double a_s_a0,
                                           const UnitSystem& units) {
  ResonancePredictions p;
  p.U1 = u_born_lattice(r, a_s_a0, units);
  p.twoU1 = 2.0 * p.U1;
  p.R2 = u2_lattice(r, a_s_a0, units);
  const ThreeBody t = u3_combination(p.R2, r.gap);
  p.R1 = t.combination;
  p.R1_pert = p.R2 * (1.0 - kThreeBodyCoefficient * p.R2 / r.gap);
  p.edge = 3.0 * t.u3 - p.R2;
  p.half = 0.5 * p.R2;
  return p;
}

ResonancePredictions to_khz(const ResonancePredictions& p,
                            const UnitSystem& units) {
  ResonancePredictions k;
  k.R2 = units.er_to_khz(p.R2);
  k.R1 = units.er_to_khz(p.R1);
  k.R1_pert = units.er_to_khz(p.R1_pert);
  k.edge = units.er_to_khz(p.edge);
  k.half = units.er_to_khz(p.half);
  k.U1 = units.er_to_khz(p.U1);
  k.twoU1 = units.er_to_khz(p.twoU1);
  return k;
}

UModel parse_u_model(const std::string& s) {
  if (s == "born") return UModel::Born;
  if (s == "regularized") return UModel::Regularized;
  fail(ErrorKind::InvalidParameter, "unknown interaction model '" + s + "'");
}

InteractionLadder uniform_ladder(double U, int n_max) {
  require(n_max >= 1, "n_max must be >= 1");
  InteractionLadder l;
  l.energies.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) l.energies[n] = 0.5 * U * n * (n - 1);
  return l;
}

InteractionLadder lattice_ladder(const TrapRescaling& r, double a_s_a0,
                                 UModel model, const UnitSystem& units,
                                 int n_max, const std::vector<double>& extra) {
  InteractionLadder l;
  l.V0 = r.V0;
  l.a_s = a_s_a0;
  l.gap_mode = r.gap_mode;
  if (model == UModel::Born) {
    l = uniform_ladder(u_born_lattice(r, a_s_a0, units), n_max);
    l.V0 = r.V0;
    l.a_s = a_s_a0;
    l.gap_mode = r.gap_mode;
    return l;
  }
  l.regularized = true;
  const double u2 = u2_lattice(r, a_s_a0, units);
  const ThreeBody t = u3_combination(u2, r.gap);
  l.energies = {0.0, 0.0, u2, 3.0 * t.u3};
  for (double e : extra) l.energies.push_back(e);
  if (n_max < l.max_occupation()) l.energies.resize(n_max + 1);
  return l;
}

}  // namespace mottlab
