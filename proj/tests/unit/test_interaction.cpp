#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "mottlab/interaction.hpp"
#include "support.hpp"

using namespace mottlab;

namespace {

// Branch equation in its original gamma-ratio form, evaluated with the
// reflection-capable std::tgamma at negative arguments.
double gamma_ratio_side(double nu) {
  return std::numbers::sqrt2 * std::tgamma(-nu) / std::tgamma(-nu - 0.5);
}

const UnitSystem& units() {
  static const UnitSystem u = default_units();
  return u;
}

const TrapRescaling& rescaling(double v0) {
  static const TrapRescaling r20 =
      make_rescaling(analyze_site(20.0, units()), GapMode::Harmonic, units());
  static const TrapRescaling r25 =
      make_rescaling(analyze_site(25.0, units()), GapMode::Harmonic, units());
  return v0 == 20.0 ? r20 : r25;
}

}  // namespace

TEST_SUITE("interaction") {

TEST_CASE("branch solution satisfies the gamma-ratio relation") {
  for (double a : {1e-3, 0.05, 0.3, 1.0, 4.0, 50.0}) {
    const auto s = busch_energy(a);
    REQUIRE(s.nu > 0);
    REQUIRE(s.nu < 0.5);
    CHECK(gamma_ratio_side(s.nu) == doctest::Approx(1.0 / a).epsilon(1e-9));
    CHECK(s.E_rel == doctest::Approx(2 * s.nu + 1.5));
    CHECK(s.delta_E == doctest::Approx(s.E_rel - 1.5));
  }
}

TEST_CASE("branch limits") {
  const double a = 1e-4;
  const double born = std::sqrt(2 / std::numbers::pi) * a;
  CHECK(std::abs(busch_energy(a).delta_E - born) / born < 1e-3);
  const auto inf = busch_energy(std::numeric_limits<double>::infinity());
  CHECK(std::abs(inf.delta_E - 1.0) < 1e-8);
  CHECK(busch_energy(0.0).delta_E == 0.0);
  CHECK_ERROR_KIND(busch_energy(-0.1), ErrorKind::UnsupportedBranch);
  CHECK_ERROR_KIND(busch_energy(std::nan("")), ErrorKind::InvalidParameter);
}

TEST_CASE("residual and monotonicity over random ratios") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> e(-4, 4);
  std::vector<double> as;
  for (int i = 0; i < 1000; ++i) as.push_back(std::pow(10.0, e(rng)));
  std::sort(as.begin(), as.end());
  double prev = 0;
  for (double a : as) {
    const auto s = busch_energy(a);
    CHECK(s.residual < 1e-10);
    CHECK(busch_residual(s.nu, a) < 1e-10);
    CHECK(s.delta_E >= prev);
    CHECK(s.delta_E < 1.0);
    prev = s.delta_E;
  }
}

TEST_CASE("rescaling ratio does not depend on the scattering length") {
  const auto& r = rescaling(20.0);
  const double r1 = u_born_lattice(r, 150, units()) / u_born_harmonic(r, 150, units());
  const double r2 = u_born_lattice(r, 700, units()) / u_born_harmonic(r, 700, units());
  CHECK(std::abs(r1 - r2) / r1 < 1e-10);
  CHECK(std::abs(r1 - r.ratio) / r1 < 1e-10);
}

TEST_CASE("harmonic born shift from the separable lab-frame integral") {
  const auto& r = rescaling(20.0);
  // int phi^4 for the 1D oscillator ground state by trapezoid quadrature
  const double s = r.k_a_ho;
  const int n = 4000;
  const double L = 12 * s, h = 2 * L / n;
  double I = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = -L + i * h;
    const double phi2 = std::exp(-x * x / (s * s)) / (std::sqrt(std::numbers::pi) * s);
    I += (i == 0 || i == n ? 0.5 : 1.0) * phi2 * phi2;
  }
  I *= h;
  const double lab = u_born_from_overlap(I, 300, units());
  CHECK(std::abs(lab - u_born_harmonic(r, 300, units())) / lab < 1e-10);
}

TEST_CASE("regularized U(2) reduces to born U(1) for weak interactions") {
  const auto& r = rescaling(20.0);
  const double u2 = u2_lattice(r, 0.1, units());
  const double u1 = u_born_lattice(r, 0.1, units());
  CHECK(std::abs(u2 / u1 - 1) < 1e-3);
  CHECK(u2_lattice(r, 0.0, units()) == 0.0);
  CHECK_ERROR_KIND(u2_lattice(r, -5, units()), ErrorKind::UnsupportedBranch);
}

TEST_CASE("U(2) is downshifted from U(1) at strong interaction") {
  const auto& r = rescaling(20.0);
  for (double a : {700.0, 800.0, 900.0}) {
    CHECK(u2_lattice(r, a, units()) < u_born_lattice(r, a, units()));
  }
}

TEST_CASE("U(2) saturates") {
  const auto& r = rescaling(20.0);
  CHECK(u2_lattice(r, 800, units()) < 2 * u2_lattice(r, 400, units()));
}

TEST_CASE("depth overload") {
  const auto& r = rescaling(20.0);
  CHECK(u2_lattice(20.0, 427, units()) == doctest::Approx(u2_lattice(r, 427, units())));
  CHECK_ERROR_KIND(u2_lattice(4.0, 427, units()), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(u2_lattice(51.0, 427, units()), ErrorKind::InvalidParameter);
}

TEST_CASE("relative corrections of the rescaled and harmonic shifts coincide") {
  const auto& r = rescaling(20.0);
  for (double a = 200; a <= 500; a += 50) {
    const double u1 = u_born_lattice(r, a, units());
    const double u2 = u2_lattice(r, a, units());
    const double harm = u_born_harmonic(r, a, units());
    const double exact = busch_energy(units().a0_to_ka(a) / r.k_a_ho).delta_E * r.hbar_omega;
    CHECK(std::abs(u2 - u1) / u1 ==
          doctest::Approx(std::abs(exact - harm) / harm).epsilon(1e-9));
  }
}

TEST_CASE("three-body combination") {
  CHECK(u3_combination(0.0, 8.0).combination == 0.0);
  CHECK(u3_combination(2.0, 2.0).combination == doctest::Approx(2.0 / 2.34).epsilon(1e-15));
  const double u2 = 1e-3, gap = 1.0;
  const double pert = u2 * (1 - 1.34 * u2 / gap);
  CHECK(std::abs(u3_combination(u2, gap).combination - pert) < 1e-6);
  const auto t = u3_combination(0.7, 5.0);
  CHECK(3 * t.u3 - 2 * 0.7 == doctest::Approx(t.combination).epsilon(1e-14));
  CHECK_ERROR_KIND(u3_combination(1.0, 0.0), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(u3_combination(1.0, -2.0), ErrorKind::InvalidParameter);
}

TEST_CASE("resonance predictions") {
  for (double v0 : {20.0, 25.0}) {
    const auto& r = rescaling(v0);
    double prev_split = -1;
    for (double a = 200; a <= 900; a += 10) {
      const auto p = resonance_predictions(r, a, units());
      CHECK(p.R1 < p.R2);
      CHECK(p.edge == doctest::Approx(p.R1 + p.R2).epsilon(1e-14));
      CHECK(p.half == doctest::Approx(p.R2 / 2));
      CHECK(p.twoU1 == doctest::Approx(2 * p.U1));
      CHECK(p.R2 - p.R1 > prev_split);
      prev_split = p.R2 - p.R1;
    }
    const auto p = resonance_predictions(r, 0.1, units());
    const double hi = std::max({p.R1, p.R2, p.U1}), lo = std::min({p.R1, p.R2, p.U1});
    CHECK((hi - lo) / hi < 1e-3);
  }
  const auto p = resonance_predictions(rescaling(20.0), 427, units());
  const auto k = to_khz(p, units());
  CHECK(k.R2 == doctest::Approx(units().er_to_khz(p.R2)));
  CHECK(k.R1_pert == doctest::Approx(units().er_to_khz(p.R1_pert)));
}

TEST_CASE("gap mode changes only the three-body term") {
  const auto site = analyze_site(20.0, units());
  const auto h = make_rescaling(site, GapMode::Harmonic, units());
  const auto q = make_rescaling(site, GapMode::ZoneCenter, units());
  const auto ph = resonance_predictions(h, 500, units());
  const auto pq = resonance_predictions(q, 500, units());
  CHECK(ph.R2 == pq.R2);
  CHECK(q.gap < h.gap);
  CHECK(pq.R1 < ph.R1);
}

TEST_CASE("interaction ladders") {
  const auto u = uniform_ladder(0.5, 4);
  CHECK(u.E(0) == 0);
  CHECK(u.E(1) == 0);
  CHECK(u.E(3) == doctest::Approx(1.5));
  CHECK(u.max_occupation() == 4);
  const auto& r = rescaling(20.0);
  const auto born = lattice_ladder(r, 300, UModel::Born, units(), 3);
  CHECK(born.E(2) == doctest::Approx(u_born_lattice(r, 300, units())));
  CHECK(!born.regularized);
  const auto reg = lattice_ladder(r, 300, UModel::Regularized, units(), 3);
  CHECK(reg.regularized);
  CHECK(reg.E(1) == 0);
  CHECK(reg.E(2) >= 0);
  CHECK(reg.E(3) - 2 * reg.E(2) <= reg.E(2));
  CHECK(reg.max_occupation() == 3);
  const auto ext = lattice_ladder(r, 300, UModel::Regularized, units(), 4, {9.0});
  CHECK(ext.max_occupation() == 4);
  CHECK(ext.E(4) == 9.0);
  CHECK(parse_u_model("regularized") == UModel::Regularized);
  CHECK_ERROR_KIND(parse_u_model("hartree"), ErrorKind::InvalidParameter);
}

}
