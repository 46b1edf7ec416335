#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "mottlab/fitting.hpp"
#include "support.hpp"

using namespace mottlab;

namespace {

DataSeries sample(const Eigen::VectorXd& p, double lo, double hi, int n,
                  double noise = 0, unsigned seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, noise > 0 ? noise : 1);
  DataSeries d;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    d.x.push_back(x);
    d.y.push_back(multi_gaussian(p, x) + (noise > 0 ? g(rng) : 0.0));
  }
  return d;
}

Eigen::VectorXd three_peaks(double U) {
  Eigen::VectorXd p(10);
  p << 0.05, 0.5, U / 2, 0.06 * U, 1.0, U, 0.08 * U, 0.6, 2 * U, 0.1 * U;
  return p;
}

DataSeries kink_data(double vc, double noise, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  DataSeries d;
  for (int i = 0; i <= 40; ++i) {
    const double x = 5 + 0.5 * i;
    const double y = 2.0 + 0.1 * std::min(x, vc) + 1.2 * std::max(x - vc, 0.0);
    d.x.push_back(x);
    d.y.push_back(y * (1 + noise * g(rng)));
  }
  return d;
}

}  // namespace

TEST_SUITE("fitting") {

TEST_CASE("analytic jacobian matches central differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 2.0), c(-3, 3), x(-4, 4);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd p(7);
    p << c(rng), u(rng), c(rng), u(rng), -u(rng), c(rng), u(rng);
    const double at = x(rng);
    const auto J = multi_gaussian_jacobian(p, at);
    for (int k = 0; k < p.size(); ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(p[k]));
      Eigen::VectorXd a = p, b = p;
      a[k] += h;
      b[k] -= h;
      const double fd = (multi_gaussian(a, at) - multi_gaussian(b, at)) / (2 * h);
      CHECK(std::abs(J[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("noiseless single gaussian") {
  Eigen::VectorXd p(4);
  p << 0.3, 2.0, 1.7, 0.25;
  const auto m = fit_gaussians(sample(p, 0, 4, 200), 1);
  CHECK(m.converged);
  CHECK(testing::rel(m.peaks[0].amplitude, 2.0) < 1e-8);
  CHECK(testing::rel(m.peaks[0].center, 1.7) < 1e-8);
  CHECK(testing::rel(m.peaks[0].sigma, 0.25) < 1e-8);
  CHECK(testing::rel(m.baseline, 0.3) < 1e-8);
  CHECK(m.residual_norm <= m.initial_residual_norm);
}

TEST_CASE("three resonances at SNR 20") {
  const double U = 2.0;
  const auto truth = three_peaks(U);
  const double noise = 0.5 / 20;  // weakest peak at SNR 20
  int covered = 0, rows = 0;
  std::vector<double> worst;
  for (unsigned seed = 0; seed < 100; ++seed) {
    const auto m = fit_gaussians(sample(truth, 0, 3 * U, 301, noise, seed), 3);
    REQUIRE(m.peaks.size() == 3);
    const double want[] = {U / 2, U, 2 * U};
    double w = 0;
    for (int i = 0; i < 3; ++i) w = std::max(w, std::abs(m.peaks[i].center - want[i]) / want[i]);
    worst.push_back(w);
    CHECK(m.residual_norm <= m.initial_residual_norm);
    const auto table = resonance_table({m}, {"s"});
    for (int i = 0; i < 3; ++i) {
      ++rows;
      covered += std::abs(table[i].center - want[i]) <= 2 * table[i].center_sigma;
    }
  }
  CHECK(covered >= 0.9 * rows);
  std::sort(worst.begin(), worst.end());
  CHECK(worst[94] < 0.01);
}

TEST_CASE("peak order of the initial guess does not matter") {
  const auto truth = three_peaks(1.0);
  const auto d = sample(truth, 0, 3, 301);
  std::vector<GaussianPeak> a{{0.5, 0.52, 0.05}, {1.0, 0.97, 0.1}, {0.6, 2.05, 0.1}};
  std::vector<GaussianPeak> b{a[2], a[0], a[1]};
  const auto ma = fit_gaussians(d, 3, a), mb = fit_gaussians(d, 3, b);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(ma.peaks[i].center - mb.peaks[i].center) < 1e-8);
    CHECK(std::abs(ma.peaks[i].center - truth[2 + 3 * i]) < 1e-8);
  }
  CHECK(std::is_sorted(ma.peaks.begin(), ma.peaks.end(),
                       [](auto& x, auto& y) { return x.center < y.center; }));
}

TEST_CASE("weighted fit honors sigma") {
  Eigen::VectorXd p(4);
  p << 0.0, 1.0, 0.0, 1.0;
  auto d = sample(p, -5, 5, 101, 0.01, 9);
  d.sigma.assign(d.x.size(), 0.01);
  const auto m = fit_gaussians(d, 1);
  CHECK(m.converged);
  // with true sigmas the covariance is not rescaled
  CHECK(m.center_uncertainty(0) > 0);
  CHECK(m.center_uncertainty(0) < 0.01);
  const Eigen::MatrixXd c = m.covariance;
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("constant data never crashes") {
  DataSeries d;
  for (int i = 0; i < 30; ++i) {
    d.x.push_back(i);
    d.y.push_back(4.0);
  }
  bool ok = false;
  try {
    const auto m = fit_gaussians(d, 1);
    ok = !m.converged || std::abs(m.peaks[0].amplitude) < 1e-6 ||
         m.peaks[0].sigma > 1e3 || m.residual_norm < 1e-8;
  } catch (const Error& e) {
    ok = e.is_numerical();
  }
  CHECK(ok);
}

TEST_CASE("identical initial peaks trigger restarts") {
  const auto d = sample(three_peaks(1.0), 0, 3, 301);
  std::vector<GaussianPeak> same(2, GaussianPeak{1.0, 1.0, 0.1});
  try {
    const auto m = fit_gaussians(d, 2, same);
    CHECK(m.restarts >= 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Numerical);
  }
}

TEST_CASE("fit validation") {
  DataSeries d;
  d.x = {0, 1, 2};
  d.y = {1, 2, 1};
  CHECK_ERROR_KIND(fit_gaussians(d, 1), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(fit_gaussians(sample(three_peaks(1), 0, 3, 301), 7), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(fit_gaussians(sample(three_peaks(1), 0, 3, 301), 0), ErrorKind::InvalidParameter);
  auto bad = sample(three_peaks(1), 0, 3, 50);
  std::swap(bad.x[3], bad.x[4]);
  CHECK_ERROR_KIND(fit_gaussians(bad, 1), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(fit_kink(d), ErrorKind::InvalidParameter);
}

TEST_CASE("noiseless kink") {
  const auto m = fit_kink(kink_data(12.0, 0, 0));
  CHECK(m.converged);
  CHECK(!m.boundary_kink);
  CHECK(std::abs(m.V_C - 12.0) < 1e-6);
  CHECK(m.left_slope == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(m.right_slope == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(m.evaluate(12.0) == doctest::Approx(2.0 + 1.2).epsilon(1e-6));
}

TEST_CASE("kink with 5% noise") {
  std::vector<double> err;
  for (unsigned s = 0; s < 30; ++s) err.push_back(std::abs(fit_kink(kink_data(12.0, 0.05, s)).V_C - 12));
  std::sort(err.begin(), err.end());
  CHECK(err[static_cast<std::size_t>(0.95 * (err.size() - 1))] < 0.5);
}

TEST_CASE("straight line reports a boundary kink") {
  DataSeries d;
  for (int i = 0; i < 30; ++i) {
    d.x.push_back(i);
    d.y.push_back(1.0 + 0.5 * i);
  }
  const auto m = fit_kink(d);
  CHECK(m.boundary_kink);
  CHECK(!m.warning.empty());
}

TEST_CASE("resonance table") {
  Eigen::VectorXd p(4);
  p << 0.0, 1.0, 2.5, 0.3;
  const auto m = fit_gaussians(sample(p, 0, 5, 100, 0.01, 1), 1);
  const auto rows = resonance_table({m}, {"U"});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].label == "U");
  CHECK(rows[0].center == m.peaks[0].center);
  CHECK(rows[0].center_sigma == doctest::Approx(std::sqrt(m.covariance(2, 2))));
  CHECK(!rows[0].flagged);
  auto bad = m;
  bad.converged = false;
  CHECK(resonance_table({bad}, {})[0].flagged);
  CHECK_ERROR_KIND(resonance_table({m}, {"a", "b"}), ErrorKind::InvalidParameter);
}

}
