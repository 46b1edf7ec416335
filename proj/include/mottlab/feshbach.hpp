#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace mottlab {

struct FeshbachResonance {
  double B0 = 0.0;     // G
  double Delta = 0.0;  // G
};

/// a(B) = (a_bg + slope (B - B_min)) * prod_i (1 - Delta_i / (B - B0_i)).
struct FeshbachConfig {
  double a_bg = 0.0;   // a0
  double slope = 0.0;  // a0 / G
  std::vector<FeshbachResonance> resonances;
  double B_min = 0.0;
  double B_max = 0.0;
  double pole_exclusion = 0.05;  // G

  void validate() const;
};

FeshbachConfig feshbach_from_json(const nlohmann::json& j);
nlohmann::json feshbach_to_json(const FeshbachConfig& cfg);
FeshbachConfig load_feshbach(const std::string& path);

struct FieldPoint {
  double B = 0.0;
  double a_s = 0.0;
  bool in_range = true;
};

FieldPoint a_s_of_B(const FeshbachConfig& cfg, double B);

/// Bisection inverse on a monotonic bracket.
double B_of_a_s(const FeshbachConfig& cfg, double a_target,
                std::pair<double, double> bracket);

struct MonotonicSegment {
  double B_lo = 0.0;
  double B_hi = 0.0;
  bool increasing = true;
};

/// Splits the valid range at poles and at sampled extrema.
std::vector<MonotonicSegment> monotonic_segments(const FeshbachConfig& cfg,
                                                 int samples_per_segment = 512);

}  // namespace mottlab
