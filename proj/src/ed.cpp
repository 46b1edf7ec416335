#include "mottlab/ed.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "mottlab/errors.hpp"
#include "mottlab/parallel.hpp"
#include "mottlab/wannier.hpp"

namespace mottlab {

DriveCoupling drive_from_lattice(double V0, double a_s_a0, UModel model,
                                 const UnitSystem& units, double step) {
  require(step > 0 && V0 - step > 0, "drive derivative step must fit below V0");
  auto ladder_at = [&](double v, double& J) {
    const LatticeSite site = analyze_site(v, units);
    J = site.J;
    return lattice_ladder(make_rescaling(site, GapMode::Harmonic, units),
                          a_s_a0, model, units, 3);
  };
  double j_lo = 0.0, j_hi = 0.0;
  const InteractionLadder lo = ladder_at(V0 - step, j_lo);
  const InteractionLadder hi = ladder_at(V0 + step, j_hi);
  DriveCoupling c;
  c.dlogJ = (std::log(j_hi) - std::log(j_lo)) / (2.0 * step);
  c.dlogE.assign(4, 0.0);
  for (int n = 2; n <= 3; ++n) {
    if (lo.E(n) > 0 && hi.E(n) > 0) {
      c.dlogE[n] = (std::log(hi.E(n)) - std::log(lo.E(n))) / (2.0 * step);
    }
  }
  return c;
}

void ChainConfig::validate() const {
  require(L >= 2 && L <= 10, "chain length L must be in [2, 10]");
  require(N >= 1 && N <= 12, "particle number N must be in [1, 12]");
  require(n_max >= 1 && n_max <= 4, "n_max must be in [1, 4]");
  require(std::isfinite(J) && J >= 0, "J must be non-negative");
  if (ladder.max_occupation() < n_max) {
    fail(ErrorKind::UnsupportedOccupation,
         "interaction ladder defines E_n only up to n = " +
             std::to_string(ladder.max_occupation()) + " but n_max = " +
             std::to_string(n_max) + "; supply the missing E_n explicitly");
  }
  require(drive.amplitude_fraction >= 0, "drive amplitude must be >= 0");
}

double ChainConfig::onsite_energy(int n) const { return ladder.E(n); }

double ChainConfig::trap_energy(int site) const {
  const double c = trap.center.value_or(0.5 * (L - 1));
  const double dx = site - c;
  return 0.5 * trap.kappa * dx * dx;
}

double ChainConfig::interaction_scale() const {
  return ladder.max_occupation() >= 2 ? ladder.E(2) : 0.0;
}

double ChainConfig::broadening() const {
  if (drive.eta) return *drive.eta;
  const double u = interaction_scale();
  return u > 0 ? 0.05 * u : 0.05;
}

ChainOperators build_operators(const ChainConfig& cfg, const Basis& basis) {
  cfg.validate();
  const std::size_t dim = basis.size();
  const int L = basis.sites();
  ChainOperators ops;
  ops.interaction.resize(dim);
  ops.trap.resize(dim);
  ops.drive_diagonal.resize(dim);

  const auto& dlogE = cfg.drive.coupling.dlogE;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<std::uint8_t> work(L);
  const int bonds = cfg.periodic && L > 2 ? L : L - 1;
  for (std::size_t s = 0; s < dim; ++s) {
    const auto occ = basis.state(s);
    double e_int = 0.0, e_trap = 0.0, e_drive = 0.0;
    for (int i = 0; i < L; ++i) {
      const int n = occ[i];
      e_int += cfg.onsite_energy(n);
      e_trap += cfg.trap_energy(i) * n;
      if (n < static_cast<int>(dlogE.size())) e_drive += cfg.onsite_energy(n) * dlogE[n];
    }
    ops.interaction[s] = e_int;
    ops.trap[s] = e_trap;
    ops.drive_diagonal[s] = e_drive;

    // a+_i a_j for each bond in both directions.
    for (int b = 0; b < bonds; ++b) {
      const int i = b, j = (b + 1) % L;
      for (int dir = 0; dir < 2; ++dir) {
        const int to = dir == 0 ? i : j;
        const int from = dir == 0 ? j : i;
        if (occ[from] == 0 || occ[to] >= basis.max_occupation()) continue;
        std::copy(occ.begin(), occ.end(), work.begin());
        const double amp = std::sqrt(static_cast<double>(occ[from]) *
                                     (occ[to] + 1.0));
        work[from] -= 1;
        work[to] += 1;
        const std::size_t t = basis.index(work);
        trips.emplace_back(static_cast<int>(t), static_cast<int>(s), -amp);
      }
    }
  }
  ops.hopping.resize(static_cast<int>(dim), static_cast<int>(dim));
  ops.hopping.setFromTriplets(trips.begin(), trips.end());
  return ops;
}

Eigen::SparseMatrix<double> build_hamiltonian(const ChainConfig& cfg,
                                              const Basis& basis) {
  const ChainOperators ops = build_operators(cfg, basis);
  Eigen::SparseMatrix<double> H = cfg.J * ops.hopping;
  Eigen::VectorXd diag = ops.interaction + ops.trap;
  Eigen::SparseMatrix<double> D(H.rows(), H.cols());
  D.reserve(Eigen::VectorXi::Constant(H.cols(), 1));
  for (int i = 0; i < diag.size(); ++i) D.insert(i, i) = diag[i];
  H += D;
  H.makeCompressed();
  return H;
}

Eigen::SparseMatrix<double> drive_operator(const ChainConfig& cfg,
                                           const ChainOperators& ops) {
  const double dV = cfg.drive.amplitude_fraction * cfg.drive.V0;
  Eigen::SparseMatrix<double> W = (dV * cfg.J * cfg.drive.coupling.dlogJ) * ops.hopping;
  Eigen::SparseMatrix<double> D(W.rows(), W.cols());
  D.reserve(Eigen::VectorXi::Constant(W.cols(), 1));
  for (int i = 0; i < ops.drive_diagonal.size(); ++i) {
    D.insert(i, i) = dV * ops.drive_diagonal[i];
  }
  W += D;
  W.makeCompressed();
  return W;
}

LanczosResult lanczos_lowest(const Eigen::SparseMatrix<double>& H,
                             const LanczosOptions& opts) {
  const int dim = static_cast<int>(H.rows());
  require(dim >= 1, "empty operator");
  const int k = std::min(opts.n_eigen, dim);
  const int max_m = std::min(opts.max_iterations, dim);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  v.normalize();

  std::vector<Eigen::VectorXd> V;
  V.reserve(max_m);
  std::vector<double> alpha, beta;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;

  for (int m = 0; m < max_m; ++m) {
    V.push_back(v);
    Eigen::VectorXd w = H * v;
    const double a = v.dot(w);
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : V) w -= q.dot(w) * q;
    }
    const double b = w.norm();
    const int size = m + 1;
    const bool exhausted = b < 1e-13 * std::max(1.0, std::abs(a)) || size == max_m;

    if (size >= k && (size % 5 == 0 || exhausted)) {
      Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), size);
      Eigen::VectorXd e = size > 1
          ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), size - 1))
          : Eigen::VectorXd();
      tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      if (tri.info() != Eigen::Success) {
        Eigen::MatrixXd t = d.asDiagonal();
        if (size > 1) {
          t.diagonal(1) = e;
          t.diagonal(-1) = e;
        }
        tri.compute(t, Eigen::ComputeEigenvectors);
      }
      if (tri.info() != Eigen::Success) {
        fail(ErrorKind::Numerical, "Lanczos tridiagonal solve failed");
      }
      bool converged = true;
      for (int i = 0; i < k; ++i) {
        const double theta = tri.eigenvalues()[i];
        const double resid = b * std::abs(tri.eigenvectors()(size - 1, i));
        if (resid > opts.tolerance * std::max(1.0, std::abs(theta))) converged = false;
      }
      if (converged || exhausted) {
        if (!converged && size == max_m && size < dim) {
          fail(ErrorKind::Numerical, "Lanczos did not converge in " +
                                         std::to_string(max_m) + " iterations");
        }
        LanczosResult r;
        r.iterations = size;
        for (int i = 0; i < k; ++i) r.eigenvalues.push_back(tri.eigenvalues()[i]);
        r.ground_state = Eigen::VectorXd::Zero(dim);
        for (int j = 0; j < size; ++j) r.ground_state += tri.eigenvectors()(j, 0) * V[j];
        r.ground_state.normalize();
        return r;
      }
    }
    beta.push_back(b);
    v = w / b;
  }
  fail(ErrorKind::Numerical, "Lanczos did not converge");
}

namespace {

Eigen::MatrixXd dense(const Eigen::SparseMatrix<double>& H) {
  return Eigen::MatrixXd(H);
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> diagonalize(
    const Eigen::MatrixXd& H, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      H, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    fail(ErrorKind::Numerical, "dense eigensolver did not converge");
  }
  return es;
}

void require_dense(std::size_t dim) {
  if (dim > kDenseLimit) {
    fail(ErrorKind::Capacity, "dimension " + std::to_string(dim) +
                                  " exceeds the dense limit of " +
                                  std::to_string(kDenseLimit));
  }
}

}  // namespace

GroundAndGap ground_and_gap(const ChainConfig& cfg, EigenMethod method) {
  const Basis basis(cfg.L, cfg.N, cfg.n_max);
  const auto H = build_hamiltonian(cfg, basis);
  GroundAndGap r;
  r.dimension = basis.size();
  const bool use_dense = method == EigenMethod::Dense ||
                         (method == EigenMethod::Auto && basis.size() <= kDenseLimit);
  if (basis.size() == 1) {
    r.E0 = H.coeff(0, 0);
    r.gap = 0.0;
    return r;
  }
  if (use_dense) {
    const auto es = diagonalize(dense(H), false);
    r.E0 = es.eigenvalues()[0];
    r.gap = es.eigenvalues()[1] - r.E0;
    r.dense = true;
  } else {
    const auto lz = lanczos_lowest(H);
    r.E0 = lz.eigenvalues[0];
    r.gap = lz.eigenvalues.size() > 1 ? lz.eigenvalues[1] - r.E0 : 0.0;
    r.dense = false;
  }
  return r;
}

std::vector<double> chain_spectrum(const ChainConfig& cfg) {
  const Basis basis(cfg.L, cfg.N, cfg.n_max);
  require_dense(basis.size());
  const auto es = diagonalize(dense(build_hamiltonian(cfg, basis)), false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

SpectrumResult golden_rule_spectrum(const ChainConfig& cfg,
                                    const std::vector<double>& freq_grid) {
  require(!freq_grid.empty(), "frequency grid must not be empty");
  const Basis basis(cfg.L, cfg.N, cfg.n_max);
  require_dense(basis.size());
  const ChainOperators ops = build_operators(cfg, basis);
  Eigen::SparseMatrix<double> H = cfg.J * ops.hopping;
  Eigen::MatrixXd Hd = dense(H);
  Hd.diagonal() += ops.interaction + ops.trap;
  const auto es = diagonalize(Hd, true);
  const Eigen::SparseMatrix<double> W = drive_operator(cfg, ops);

  const Eigen::VectorXd psi0 = es.eigenvectors().col(0);
  const Eigen::VectorXd Wpsi = W * psi0;
  const Eigen::VectorXd amps = es.eigenvectors().transpose() * Wpsi;

  SpectrumResult r;
  r.method = SpectrumMethod::GoldenRule;
  r.ground_energy = es.eigenvalues()[0];
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int x = 1; x < amps.size(); ++x) {
    const double dE = es.eigenvalues()[x] - r.ground_energy;
    if (dE <= 1e-12 * scale) continue;  // degenerate with the ground state
    const double wgt = amps[x] * amps[x];
    if (wgt > 0) r.transitions.push_back({dE, wgt});
  }
  const double eta = cfg.broadening();
  require(eta > 0, "broadening must be positive");
  r.frequencies = freq_grid;
  r.response.assign(freq_grid.size(), 0.0);
  for (std::size_t i = 0; i < freq_grid.size(); ++i) {
    double s = 0.0;
    for (const auto& t : r.transitions) {
      const double d = freq_grid[i] - t.energy;
      s += t.weight * eta / (std::numbers::pi * (d * d + eta * eta));
    }
    r.response[i] = s;
  }
  return r;
}

std::vector<Peak> find_peaks(const SpectrumResult& s, double eta,
                             double min_relative) {
  std::vector<Peak> peaks;
  const auto& y = s.response;
  if (y.size() < 3) return peaks;
  const double ymax = *std::max_element(y.begin(), y.end());
  if (ymax <= 0) return peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    if (y[i] < min_relative * ymax) continue;
    Peak p;
    p.position = s.frequencies[i];
    p.height = y[i];
    p.line = p.position;
    for (const auto& t : s.transitions) {
      if (std::abs(t.energy - p.position) <= eta && t.weight > p.line_weight) {
        p.line = t.energy;
        p.line_weight = t.weight;
      }
    }
    peaks.push_back(p);
  }
  return peaks;
}

namespace {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

CMatrix propagator(const Eigen::MatrixXd& H, double dt) {
  const auto es = diagonalize(H, true);
  const Eigen::MatrixXd& V = es.eigenvectors();
  CVector phases(V.cols());
  for (int i = 0; i < phases.size(); ++i) {
    phases[i] = std::polar(1.0, -es.eigenvalues()[i] * dt);
  }
  const CMatrix Vc = V.cast<std::complex<double>>();
  return Vc * phases.asDiagonal() * Vc.adjoint();
}

double energy_of(const Eigen::MatrixXd& H0, const CVector& psi) {
  return (psi.adjoint() * H0.cast<std::complex<double>>() * psi)(0).real();
}

}  // namespace

double time_evolution_absorption(const ChainConfig& cfg, double f_M,
                                 int n_cycles, const EvolutionOptions& opts) {
  require(f_M >= 0 && std::isfinite(f_M), "modulation frequency must be >= 0");
  require(n_cycles >= 1, "need at least one modulation cycle");
  require(opts.steps_per_cycle >= 64, "need at least 64 steps per cycle");
  const Basis basis(cfg.L, cfg.N, cfg.n_max);
  require_dense(basis.size());
  const ChainOperators ops = build_operators(cfg, basis);
  Eigen::MatrixXd H0 = dense(cfg.J * ops.hopping);
  H0.diagonal() += ops.interaction + ops.trap;
  const Eigen::MatrixXd W = dense(drive_operator(cfg, ops));

  const auto es = diagonalize(H0, true);
  const double E0 = es.eigenvalues()[0];
  const CVector psi0 = es.eigenvectors().col(0).cast<std::complex<double>>();

  // Static stepping must conserve the energy to the requested accuracy.
  {
    const CMatrix U = propagator(H0, 1.0);
    CVector psi = psi0;
    for (int i = 0; i < opts.steps_per_cycle; ++i) psi = U * psi;
    const double drift = std::abs(energy_of(H0, psi) - E0);
    if (drift > 1e-8) {
      fail(ErrorKind::Numerical, "static energy drift " + std::to_string(drift) +
                                     " E_R exceeds 1e-8");
    }
    if (f_M == 0.0) return drift;
  }

  // hbar = 1 with energies in E_R: the drive phase advances by f_M per unit time.
  const int steps = opts.steps_per_cycle;
  const double period = 2.0 * std::numbers::pi / f_M;
  const double dt = period / steps;
  std::vector<CMatrix> cycle(steps);
  for (int s = 0; s < steps; ++s) {
    const double drive = std::sin(f_M * (s + 0.5) * dt);
    cycle[s] = propagator(H0 + drive * W, dt);
  }
  CVector psi = psi0;
  for (int c = 0; c < n_cycles; ++c) {
    for (int s = 0; s < steps; ++s) psi = cycle[s] * psi;
  }
  return energy_of(H0, psi) - E0;
}

SpectrumResult absorption_spectrum(const ChainConfig& cfg,
                                   const std::vector<double>& freq_grid,
                                   int n_cycles, int jobs,
                                   const EvolutionOptions& opts) {
  require(!freq_grid.empty(), "frequency grid must not be empty");
  SpectrumResult r;
  r.method = SpectrumMethod::TimeEvolution;
  r.frequencies = freq_grid;
  r.response.assign(freq_grid.size(), 0.0);
  parallel_for(freq_grid.size(), jobs, [&](std::size_t i) {
    r.response[i] = std::max(0.0, time_evolution_absorption(cfg, freq_grid[i],
                                                            n_cycles, opts));
  });
  const auto gg = ground_and_gap(cfg, EigenMethod::Dense);
  r.ground_energy = gg.E0;
  return r;
}

}  // namespace mottlab
