#include "mottlab/feshbach.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mottlab/errors.hpp"

namespace mottlab {

void FeshbachConfig::validate() const {
  require(B_max > B_min, "feshbach valid_range must be nonempty");
  require(pole_exclusion > 0, "pole_exclusion must be positive");
  for (std::size_t i = 0; i < resonances.size(); ++i) {
    for (std::size_t j = i + 1; j < resonances.size(); ++j) {
      require(resonances[i].B0 != resonances[j].B0,
              "resonance poles must be distinct");
    }
  }
}

FeshbachConfig feshbach_from_json(const nlohmann::json& j) {
  FeshbachConfig cfg;
  try {
    cfg.a_bg = j.at("a_bg").get<double>();
    cfg.slope = j.value("slope", 0.0);
    for (const auto& r : j.value("resonances", nlohmann::json::array())) {
      cfg.resonances.push_back({r.at("B0").get<double>(),
                                r.at("Delta").get<double>()});
    }
    const auto range = j.at("valid_range");
    require(range.is_array() && range.size() == 2,
            "valid_range must be [B_min, B_max]");
    cfg.B_min = range[0].get<double>();
    cfg.B_max = range[1].get<double>();
    cfg.pole_exclusion = j.value("pole_exclusion", 0.05);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidParameter,
         std::string("invalid feshbach config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json feshbach_to_json(const FeshbachConfig& cfg) {
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : cfg.resonances) res.push_back({{"B0", r.B0}, {"Delta", r.Delta}});
  return {{"a_bg", cfg.a_bg},
          {"slope", cfg.slope},
          {"resonances", res},
          {"valid_range", {cfg.B_min, cfg.B_max}},
          {"pole_exclusion", cfg.pole_exclusion}};
}

FeshbachConfig load_feshbach(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidParameter, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidParameter, path + ": " + e.what());
  }
  return feshbach_from_json(j);
}

namespace {

double evaluate(const FeshbachConfig& cfg, double B) {
  double a = cfg.a_bg + cfg.slope * (B - cfg.B_min);
  for (const auto& r : cfg.resonances) a *= 1.0 - r.Delta / (B - r.B0);
  return a;
}

bool near_pole(const FeshbachConfig& cfg, double B) {
  return std::any_of(cfg.resonances.begin(), cfg.resonances.end(),
                     [&](const FeshbachResonance& r) {
                       // slack so B0 -+ exclusion itself stays admissible
                       return std::abs(B - r.B0) < cfg.pole_exclusion * (1 - 1e-9);
                     });
}

}  // namespace

FieldPoint a_s_of_B(const FeshbachConfig& cfg, double B) {
  if (!(B >= cfg.B_min && B <= cfg.B_max)) {
    std::ostringstream os;
    os << "B = " << B << " G outside valid range [" << cfg.B_min << ", "
       << cfg.B_max << "]";
    fail(ErrorKind::Range, os.str());
  }
  if (near_pole(cfg, B)) {
    std::ostringstream os;
    os << "B = " << B << " G is within " << cfg.pole_exclusion
       << " G of a resonance pole";
    fail(ErrorKind::PoleProximity, os.str());
  }
  return {B, evaluate(cfg, B), true};
}

double B_of_a_s(const FeshbachConfig& cfg, double a_target,
                std::pair<double, double> bracket) {
  auto [lo, hi] = bracket;
  if (lo > hi) std::swap(lo, hi);
  if (!(lo >= cfg.B_min && hi <= cfg.B_max && hi > lo)) {
    fail(ErrorKind::InvalidBracket, "bracket must lie inside the valid range");
  }
  for (const auto& r : cfg.resonances) {
    if (r.B0 > lo - cfg.pole_exclusion && r.B0 < hi + cfg.pole_exclusion) {
      fail(ErrorKind::InvalidBracket, "bracket contains a resonance pole");
    }
  }
  constexpr int kSamples = 256;
  double prev = evaluate(cfg, lo);
  int direction = 0;
  for (int i = 1; i <= kSamples; ++i) {
    const double cur = evaluate(cfg, lo + (hi - lo) * i / kSamples);
    const int d = cur > prev ? 1 : (cur < prev ? -1 : 0);
    if (d != 0) {
      if (direction != 0 && d != direction) {
        fail(ErrorKind::InvalidBracket, "a_s(B) is not monotonic on bracket");
      }
      direction = d;
    }
    prev = cur;
  }
  if (direction == 0) fail(ErrorKind::InvalidBracket, "a_s(B) is flat on bracket");

  const double a_lo = evaluate(cfg, lo), a_hi = evaluate(cfg, hi);
  if ((a_target - a_lo) * (a_target - a_hi) > 0) {
    fail(ErrorKind::InvalidBracket, "target scattering length not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = (evaluate(cfg, mid) - a_target) * direction;
    if (g > 0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<MonotonicSegment> monotonic_segments(const FeshbachConfig& cfg,
                                                 int samples_per_segment) {
  cfg.validate();
  require(samples_per_segment >= 8, "need at least 8 samples per segment");
  std::vector<double> cuts{cfg.B_min};
  std::vector<double> poles;
  for (const auto& r : cfg.resonances) {
    if (r.B0 > cfg.B_min && r.B0 < cfg.B_max) poles.push_back(r.B0);
  }
  std::sort(poles.begin(), poles.end());
  for (double p : poles) {
    cuts.push_back(p - cfg.pole_exclusion);
    cuts.push_back(p + cfg.pole_exclusion);
  }
  cuts.push_back(cfg.B_max);

  std::vector<MonotonicSegment> out;
  for (std::size_t s = 0; s + 1 < cuts.size(); s += 2) {
    const double lo = cuts[s], hi = cuts[s + 1];
    if (hi <= lo) continue;
    const int n = samples_per_segment;
    double seg_start = lo;
    int dir = 0;
    double prev = evaluate(cfg, lo);
    for (int i = 1; i <= n; ++i) {
      const double B = lo + (hi - lo) * i / n;
      const double cur = evaluate(cfg, B);
      const int d = cur > prev ? 1 : (cur < prev ? -1 : 0);
      if (d != 0 && dir != 0 && d != dir) {
        const double turn = lo + (hi - lo) * (i - 1) / n;
        out.push_back({seg_start, turn, dir > 0});
        seg_start = turn;
      }
      if (d != 0) dir = d;
      prev = cur;
    }
    out.push_back({seg_start, hi, dir >= 0});
  }
  return out;
}

}  // namespace mottlab
