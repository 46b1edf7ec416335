#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mottlab/ed.hpp"
#include "mottlab/feshbach.hpp"
#include "mottlab/units.hpp"
#include "mottlab/wannier.hpp"

namespace mottlab {

struct RunConfig {
  PhysicalConstants constants;
  double wavelength = 1064.5e-9;
  LatticeNumerics numerics;
  std::optional<std::string> feshbach_path;
  std::optional<FeshbachConfig> feshbach;
  std::vector<double> v0_grid;
  std::vector<double> as_grid;
  std::vector<double> b_grid;
  std::string out_dir;
  int jobs = 1;
  unsigned seed = 0;

  UnitSystem units() const;
};

/// Reads the global config file; relative paths inside it resolve against
/// the file's directory.
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json(const nlohmann::json& j,
                               const std::string& base_dir = ".");

/// Everything that influences results, excluding jobs and output location.
nlohmann::json describe(const RunConfig& cfg);

/// Grid syntax: comma-separated numbers or inclusive start:stop:step ranges.
std::vector<double> parse_grid(const std::string& text);

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

ChainConfig chain_from_json(const nlohmann::json& j, const UnitSystem& units);
ChainConfig load_chain(const std::string& path, const UnitSystem& units);

}  // namespace mottlab
