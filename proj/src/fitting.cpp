#include "mottlab/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mottlab/errors.hpp"

namespace mottlab {

void DataSeries::validate(int free_parameters) const {
  require(x.size() == y.size(), "x and y must have equal length");
  require(sigma.empty() || sigma.size() == x.size(),
          "sigma must be empty or match the data length");
  require(x.size() >= static_cast<std::size_t>(3 * free_parameters),
          "need at least 3 points per free parameter");
  for (std::size_t i = 1; i < x.size(); ++i) {
    require(x[i] > x[i - 1], "x must be strictly increasing");
  }
  for (double s : sigma) require(s > 0, "sigma entries must be positive");
}

double multi_gaussian(const Eigen::VectorXd& p, double x) {
  double v = p[0];
  for (Eigen::Index i = 1; i + 2 < p.size(); i += 3) {
    const double z = (x - p[i + 1]) / p[i + 2];
    v += p[i] * std::exp(-0.5 * z * z);
  }
  return v;
}

Eigen::RowVectorXd multi_gaussian_jacobian(const Eigen::VectorXd& p, double x) {
  Eigen::RowVectorXd row(p.size());
  row[0] = 1.0;
  for (Eigen::Index i = 1; i + 2 < p.size(); i += 3) {
    const double s = p[i + 2];
    const double z = (x - p[i + 1]) / s;
    const double g = std::exp(-0.5 * z * z);
    row[i] = g;
    row[i + 1] = p[i] * g * z / s;
    row[i + 2] = p[i] * g * z * z / s;
  }
  return row;
}

double GaussianModel::evaluate(double x) const {
  return multi_gaussian(packed(), x);
}

Eigen::VectorXd GaussianModel::packed() const {
  Eigen::VectorXd p(1 + 3 * peaks.size());
  p[0] = baseline;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    p[1 + 3 * i] = peaks[i].amplitude;
    p[2 + 3 * i] = peaks[i].center;
    p[3 + 3 * i] = peaks[i].sigma;
  }
  return p;
}

double GaussianModel::center_uncertainty(std::size_t i) const {
  const Eigen::Index j = 2 + 3 * static_cast<Eigen::Index>(i);
  if (covariance.rows() <= j) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(std::max(0.0, covariance(j, j)));
}

namespace {

std::vector<double> weights_of(const DataSeries& d) {
  std::vector<double> w(d.size(), 1.0);
  for (std::size_t i = 0; i < d.sigma.size(); ++i) w[i] = 1.0 / d.sigma[i];
  return w;
}

double cost_of(const DataSeries& d, const std::vector<double>& w,
               const Eigen::VectorXd& p) {
  double c = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = (d.y[i] - multi_gaussian(p, d.x[i])) * w[i];
    c += r * r;
  }
  return c;
}

void build_normal(const DataSeries& d, const std::vector<double>& w,
                  const Eigen::VectorXd& p, Eigen::MatrixXd& JtJ,
                  Eigen::VectorXd& Jtr) {
  const auto np = p.size();
  JtJ.setZero(np, np);
  Jtr.setZero(np);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Eigen::RowVectorXd row = multi_gaussian_jacobian(p, d.x[i]) * w[i];
    const double r = (d.y[i] - multi_gaussian(p, d.x[i])) * w[i];
    JtJ.noalias() += row.transpose() * row;
    Jtr.noalias() += row.transpose() * r;
  }
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double cut = 1e-12 * std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv[i] = std::abs(inv[i]) > cut ? 1.0 / inv[i] : 0.0;
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

struct LmOutcome {
  Eigen::VectorXd params;
  double initial_cost = 0.0;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

LmOutcome levenberg_marquardt(const DataSeries& d, const std::vector<double>& w,
                              Eigen::VectorXd p, const FitOptions& opts) {
  LmOutcome out;
  double cost = cost_of(d, w, p);
  out.initial_cost = cost;
  double lambda = opts.lambda0;
  Eigen::MatrixXd JtJ;
  Eigen::VectorXd Jtr;
  build_normal(d, w, p, JtJ, Jtr);
  const double y_scale = std::max(
      1e-300, std::accumulate(d.y.begin(), d.y.end(), 0.0,
                              [](double a, double b) { return a + b * b; }));
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (cost <= 1e-30 * y_scale) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd A = JtJ;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      A(i, i) += lambda * std::max(JtJ(i, i), 1e-12);
    }
    const Eigen::VectorXd step = A.ldlt().solve(Jtr);
    if (!step.allFinite()) {
      lambda *= opts.lambda_factor;
      continue;
    }
    Eigen::VectorXd trial = p + step;
    for (Eigen::Index i = 3; i < trial.size(); i += 3) trial[i] = std::abs(trial[i]);
    const double trial_cost = cost_of(d, w, trial);
    if (trial_cost < cost) {
      const double drop = cost - trial_cost;
      p = trial;
      cost = trial_cost;
      lambda = std::max(lambda / opts.lambda_factor, 1e-15);
      build_normal(d, w, p, JtJ, Jtr);
      const bool tiny_step = step.norm() <= 1e-12 * (p.norm() + 1e-12);
      const bool tiny_drop = drop <= 1e-15 * cost;
      if (tiny_step || tiny_drop) {
        out.converged = true;
        ++it;
        break;
      }
    } else {
      lambda *= opts.lambda_factor;
      if (lambda > 1e16) {
        // No downhill direction left: stationary to working precision.
        out.converged = Jtr.norm() <= 1e-6 * std::sqrt(y_scale) + 1e-12;
        break;
      }
    }
  }
  out.params = p;
  out.cost = cost;
  out.iterations = it;
  return out;
}

bool degenerate(const Eigen::VectorXd& p, double span) {
  const Eigen::Index k = (p.size() - 1) / 3;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (p[3 + 3 * i] < 1e-12 * span) return true;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      if (std::abs(p[2 + 3 * i] - p[2 + 3 * j]) < 1e-6 * span &&
          std::abs(p[3 + 3 * i] - p[3 + 3 * j]) < 1e-6 * span) {
        return true;
      }
    }
  }
  return false;
}

std::vector<double> smooth(const std::vector<double>& y, int half) {
  std::vector<double> s(y.size());
  const int n = static_cast<int>(y.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half), hi = std::min(n - 1, i + half);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += y[j];
    s[i] = acc / (hi - lo + 1);
  }
  return s;
}

}  // namespace

std::vector<GaussianPeak> initial_peaks(const DataSeries& data, int k_peaks) {
  const int n = static_cast<int>(data.size());
  const int half = std::max(1, n / 100);
  std::vector<double> s = smooth(data.y, half);
  const double base = *std::min_element(s.begin(), s.end());
  for (double& v : s) v -= base;
  const double dx = (data.x.back() - data.x.front()) / std::max(1, n - 1);

  std::vector<GaussianPeak> peaks;
  std::vector<double> residual = s;
  for (int p = 0; p < k_peaks; ++p) {
    // Prefer genuine local maxima of what is left; fall back to the global one.
    int best = -1;
    for (int i = 1; i + 1 < n; ++i) {
      if (residual[i] >= residual[i - 1] && residual[i] >= residual[i + 1] &&
          (best < 0 || residual[i] > residual[best])) {
        best = i;
      }
    }
    if (best < 0) {
      best = static_cast<int>(std::max_element(residual.begin(), residual.end()) -
                              residual.begin());
    }
    const double h = residual[best];
    int left = best, right = best;
    while (left > 0 && residual[left] > 0.5 * h) --left;
    while (right < n - 1 && residual[right] > 0.5 * h) ++right;
    double width = (data.x[right] - data.x[left]) / 2.3548;
    width = std::max(width, 2.0 * dx);
    GaussianPeak g{std::max(h, 1e-12), data.x[best], width};
    peaks.push_back(g);
    for (int i = 0; i < n; ++i) {
      const double z = (data.x[i] - g.center) / g.sigma;
      residual[i] -= g.amplitude * std::exp(-0.5 * z * z);
    }
  }
  return peaks;
}

GaussianModel fit_gaussians(const DataSeries& data, int k_peaks,
                            const std::optional<std::vector<GaussianPeak>>& init,
                            const FitOptions& opts) {
  require(k_peaks >= 1 && k_peaks <= 6, "k_peaks must be in [1, 6]");
  data.validate(1 + 3 * k_peaks);
  if (init) require(static_cast<int>(init->size()) == k_peaks,
                    "initial guess must have k_peaks entries");
  const auto w = weights_of(data);
  const double span = data.x.back() - data.x.front();

  std::vector<GaussianPeak> start = init ? *init : initial_peaks(data, k_peaks);
  double baseline = *std::min_element(data.y.begin(), data.y.end());
  if (init) baseline = 0.0;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> jitter;
  auto pack = [&](const std::vector<GaussianPeak>& pk) {
    Eigen::VectorXd p(1 + 3 * k_peaks);
    p[0] = baseline;
    for (int i = 0; i < k_peaks; ++i) {
      p[1 + 3 * i] = pk[i].amplitude;
      p[2 + 3 * i] = pk[i].center;
      p[3 + 3 * i] = pk[i].sigma;
    }
    return p;
  };

  Eigen::VectorXd p0 = pack(start);
  LmOutcome fit;
  int restarts = 0;
  for (;;) {
    if (!degenerate(p0, span)) {
      fit = levenberg_marquardt(data, w, p0, opts);
      if (!degenerate(fit.params, span)) break;
    }
    if (restarts == opts.max_restarts) {
      fail(ErrorKind::Numerical,
           "gaussian fit keeps collapsing onto identical peaks after " +
               std::to_string(restarts) + " restarts");
    }
    ++restarts;
    for (int i = 0; i < k_peaks; ++i) {
      p0[2 + 3 * i] = start[i].center + 0.05 * span * jitter(rng);
      p0[3 + 3 * i] = std::abs(start[i].sigma * (1.0 + 0.2 * jitter(rng))) + 1e-9 * span;
    }
  }

  // Covariance at the optimum, then reorder peaks by center.
  Eigen::MatrixXd JtJ;
  Eigen::VectorXd Jtr;
  build_normal(data, w, fit.params, JtJ, Jtr);
  Eigen::MatrixXd cov = pseudo_inverse(JtJ);
  if (data.sigma.empty()) {
    const double dof = std::max<double>(1.0, static_cast<double>(data.size()) - fit.params.size());
    cov *= fit.cost / dof;
  }

  std::vector<int> order(k_peaks);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return fit.params[2 + 3 * a] < fit.params[2 + 3 * b];
  });
  std::vector<Eigen::Index> perm{0};
  for (int i : order) {
    for (int c = 0; c < 3; ++c) perm.push_back(1 + 3 * i + c);
  }

  GaussianModel m;
  m.baseline = fit.params[0];
  for (int i : order) {
    m.peaks.push_back({fit.params[1 + 3 * i], fit.params[2 + 3 * i],
                       std::abs(fit.params[3 + 3 * i])});
  }
  const auto np = static_cast<Eigen::Index>(perm.size());
  m.covariance.resize(np, np);
  for (Eigen::Index r = 0; r < np; ++r) {
    for (Eigen::Index c = 0; c < np; ++c) m.covariance(r, c) = cov(perm[r], perm[c]);
  }
  m.converged = fit.converged;
  m.residual_norm = std::sqrt(fit.cost);
  m.initial_residual_norm = std::sqrt(fit.initial_cost);
  m.iterations = fit.iterations;
  m.restarts = restarts;
  return m;
}

double KinkModel::evaluate(double x) const {
  return offset + left_slope * std::min(x, V_C) +
         right_slope * std::max(x - V_C, 0.0);
}

namespace {

struct LinearKink {
  double a = 0, b = 0, c = 0, cost = 0;
};

LinearKink solve_linear(const DataSeries& d, const std::vector<double>& w,
                        double vc) {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Eigen::Vector3d phi(1.0, std::min(d.x[i], vc), std::max(d.x[i] - vc, 0.0));
    const double ww = w[i] * w[i];
    A.noalias() += ww * phi * phi.transpose();
    rhs.noalias() += ww * d.y[i] * phi;
  }
  const Eigen::Vector3d sol = A.completeOrthogonalDecomposition().solve(rhs);
  LinearKink k{sol[0], sol[1], sol[2], 0.0};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = (d.y[i] - (k.a + k.b * std::min(d.x[i], vc) +
                                k.c * std::max(d.x[i] - vc, 0.0))) * w[i];
    k.cost += r * r;
  }
  return k;
}

}  // namespace

KinkModel fit_kink(const DataSeries& data) {
  require(data.size() >= 8, "kink fit needs at least 8 points");
  data.validate(1);
  const auto w = weights_of(data);
  const std::size_t n = data.size();
  // Keep at least two points on each side of the breakpoint.
  const double lo = data.x[1], hi = data.x[n - 2];
  constexpr int kGrid = 400;
  int best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> grid(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    grid[i] = lo + (hi - lo) * i / kGrid;
    const double c = solve_linear(data, w, grid[i]).cost;
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }

  // Golden-section polish on the profiled cost.
  double a = grid[std::max(0, best - 1)], b = grid[std::min(kGrid, best + 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = solve_linear(data, w, x1).cost, f2 = solve_linear(data, w, x2).cost;
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - g * (b - a);
      f1 = solve_linear(data, w, x1).cost;
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + g * (b - a);
      f2 = solve_linear(data, w, x2).cost;
    }
  }
  double vc = 0.5 * (a + b);
  LinearKink lin = solve_linear(data, w, vc);
  if (best_cost < lin.cost) {
    vc = grid[best];
    lin = solve_linear(data, w, vc);
  }

  // Gauss-Newton on all four parameters; the model is smooth in V_C away
  // from the sample abscissae.
  Eigen::Vector4d p(lin.a, lin.b, lin.c, vc);
  double cost = lin.cost;
  auto jac_and_resid = [&](const Eigen::Vector4d& q, Eigen::MatrixXd& J,
                           Eigen::VectorXd& r) {
    J.resize(n, 4);
    r.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool right = data.x[i] >= q[3];
      const double model = q[0] + q[1] * std::min(data.x[i], q[3]) +
                           q[2] * std::max(data.x[i] - q[3], 0.0);
      r[i] = (data.y[i] - model) * w[i];
      J(i, 0) = w[i];
      J(i, 1) = std::min(data.x[i], q[3]) * w[i];
      J(i, 2) = std::max(data.x[i] - q[3], 0.0) * w[i];
      J(i, 3) = right ? (q[1] - q[2]) * w[i] : 0.0;
    }
  };
  Eigen::MatrixXd J;
  Eigen::VectorXd r;
  for (int it = 0; it < 20; ++it) {
    jac_and_resid(p, J, r);
    const Eigen::Vector4d step = J.completeOrthogonalDecomposition().solve(r);
    const Eigen::Vector4d trial = p + step;
    if (!(trial[3] >= lo && trial[3] <= hi)) break;
    Eigen::MatrixXd Jt;
    Eigen::VectorXd rt;
    jac_and_resid(trial, Jt, rt);
    const double tc = rt.squaredNorm();
    if (!(tc < cost)) break;
    p = trial;
    cost = tc;
  }

  KinkModel m;
  m.offset = p[0];
  m.left_slope = p[1];
  m.right_slope = p[2];
  m.V_C = p[3];
  m.residual_norm = std::sqrt(cost);
  jac_and_resid(p, J, r);
  m.covariance = pseudo_inverse(J.transpose() * J);
  if (data.sigma.empty()) {
    m.covariance *= cost / std::max<double>(1.0, static_cast<double>(n) - 4.0);
  }
  m.converged = true;

  const double step = (hi - lo) / kGrid;
  const bool at_edge = m.V_C <= lo + step || m.V_C >= hi - step;
  // Variance of (b - c) from the covariance.
  const double var_diff = m.covariance(1, 1) + m.covariance(2, 2) - 2.0 * m.covariance(1, 2);
  const double diff = std::abs(m.left_slope - m.right_slope);
  const double slope_scale = std::abs(m.left_slope) + std::abs(m.right_slope);
  const bool no_kink = diff <= 2.0 * std::sqrt(std::max(0.0, var_diff)) ||
                       diff <= 1e-9 * std::max(1.0, slope_scale);
  if (at_edge || no_kink) {
    m.boundary_kink = true;
    m.warning = at_edge ? "kink at the boundary of the data range"
                        : "slopes on both sides agree; no interior kink";
  }
  return m;
}

std::vector<ResonanceRow> resonance_table(
    const std::vector<GaussianModel>& models,
    const std::vector<std::string>& labels) {
  require(labels.empty() || labels.size() == models.size(),
          "labels must match the number of models");
  std::vector<ResonanceRow> rows;
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto& model = models[m];
    for (std::size_t i = 0; i < model.peaks.size(); ++i) {
      ResonanceRow row;
      row.label = labels.empty() ? "model" + std::to_string(m) : labels[m];
      row.peak = static_cast<int>(i);
      row.center = model.peaks[i].center;
      row.center_sigma = model.center_uncertainty(i);
      row.flagged = !model.converged;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace mottlab
