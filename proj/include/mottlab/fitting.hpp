#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace mottlab {

/// Ordered samples to fit; sigma, when present, weights the residuals.
struct DataSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;  // empty means unit weights

  void validate(int free_parameters) const;
  std::size_t size() const { return x.size(); }
};

struct GaussianPeak {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 1.0;
};

/// Parameters packed as [baseline, A_1, mu_1, s_1, ..., A_k, mu_k, s_k].
double multi_gaussian(const Eigen::VectorXd& params, double x);
/// Row of d model / d params at x.
Eigen::RowVectorXd multi_gaussian_jacobian(const Eigen::VectorXd& params,
                                           double x);

struct GaussianModel {
  std::vector<GaussianPeak> peaks;  // sorted by center
  double baseline = 0.0;
  Eigen::MatrixXd covariance;       // packed parameter order
  bool converged = false;
  double residual_norm = 0.0;
  double initial_residual_norm = 0.0;
  int iterations = 0;
  int restarts = 0;

  double evaluate(double x) const;
  Eigen::VectorXd packed() const;
  /// One-sigma uncertainty of peak i's center.
  double center_uncertainty(std::size_t i) const;
};

struct FitOptions {
  int max_iterations = 500;
  double lambda0 = 1e-3;
  double lambda_factor = 10.0;
  int max_restarts = 5;
  unsigned seed = 0;
};

GaussianModel fit_gaussians(const DataSeries& data, int k_peaks,
                            const std::optional<std::vector<GaussianPeak>>& init = {},
                            const FitOptions& opts = {});

/// Greedy peak picking on the smoothed data.
std::vector<GaussianPeak> initial_peaks(const DataSeries& data, int k_peaks);

/// Continuous piecewise-linear model with one breakpoint:
///   y = a + b min(x, V_C) + c max(x - V_C, 0).
struct KinkModel {
  double V_C = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  double offset = 0.0;
  Eigen::MatrixXd covariance;  // order: offset, left, right, V_C
  bool converged = false;
  bool boundary_kink = false;
  std::string warning;
  double residual_norm = 0.0;

  double evaluate(double x) const;
};

KinkModel fit_kink(const DataSeries& data);

struct ResonanceRow {
  std::string label;
  int peak = 0;
  double center = 0.0;
  double center_sigma = 0.0;
  bool flagged = false;  // source fit did not converge
};

std::vector<ResonanceRow> resonance_table(
    const std::vector<GaussianModel>& models,
    const std::vector<std::string>& labels);

}  // namespace mottlab
