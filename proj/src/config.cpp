#include "mottlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mottlab/errors.hpp"

namespace mottlab {

namespace fs = std::filesystem;

UnitSystem RunConfig::units() const {
  return make_units(wavelength, constants.species_mass, constants);
}

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidParameter, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidParameter, path + ": " + e.what());
  }
}

std::vector<double> grid_field(const nlohmann::json& j) {
  if (j.is_string()) return parse_grid(j.get<std::string>());
  return j.get<std::vector<double>>();
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j,
                               const std::string& base_dir) {
  RunConfig cfg;
  try {
    if (j.contains("constants")) {
      const auto& c = j["constants"];
      if (c.contains("planck_h")) {
        cfg.constants = cfg.constants.with_planck(c["planck_h"].get<double>());
      }
      cfg.constants.atomic_mass_unit =
          c.value("atomic_mass_unit", cfg.constants.atomic_mass_unit);
      cfg.constants.bohr_radius_a0 =
          c.value("bohr_radius", cfg.constants.bohr_radius_a0);
      if (c.contains("species_mass_u")) {
        cfg.constants.species_mass =
            c["species_mass_u"].get<double>() * cfg.constants.atomic_mass_unit;
      }
      cfg.constants.validate();
    }
    if (j.contains("lattice")) {
      const auto& l = j["lattice"];
      cfg.wavelength = l.value("wavelength_nm", 1064.5) * 1e-9;
      cfg.numerics.planewave_cutoff = l.value("planewave_cutoff", 41);
      cfg.numerics.q_grid = l.value("q_grid", 101);
      cfg.numerics.grid.intervals = l.value("wannier_intervals", 2048);
      cfg.numerics.grid.sites = l.value("wannier_sites", 5);
    }
    if (j.contains("feshbach")) {
      const auto& f = j["feshbach"];
      if (f.is_string()) {
        fs::path p = f.get<std::string>();
        if (p.is_relative()) p = fs::path(base_dir) / p;
        cfg.feshbach_path = p.string();
        cfg.feshbach = load_feshbach(p.string());
      } else {
        cfg.feshbach = feshbach_from_json(f);
      }
    }
    if (j.contains("grids")) {
      const auto& g = j["grids"];
      if (g.contains("v0")) cfg.v0_grid = grid_field(g["v0"]);
      if (g.contains("as")) cfg.as_grid = grid_field(g["as"]);
      if (g.contains("b")) cfg.b_grid = grid_field(g["b"]);
    }
    cfg.out_dir = j.value("out", std::string());
    cfg.jobs = j.value("jobs", 1);
    cfg.seed = j.value("seed", 0u);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidParameter, std::string("invalid config: ") + e.what());
  }
  require(cfg.jobs >= 1, "jobs must be >= 1");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  const auto base = fs::path(path).parent_path().string();
  return run_config_from_json(read_json(path), base.empty() ? "." : base);
}

nlohmann::json describe(const RunConfig& cfg) {
  nlohmann::json j;
  j["constants"] = {{"planck_h", cfg.constants.planck_h},
                    {"atomic_mass_unit", cfg.constants.atomic_mass_unit},
                    {"bohr_radius", cfg.constants.bohr_radius_a0},
                    {"species_mass", cfg.constants.species_mass}};
  j["lattice"] = {{"wavelength", cfg.wavelength},
                  {"planewave_cutoff", cfg.numerics.planewave_cutoff},
                  {"q_grid", cfg.numerics.q_grid},
                  {"wannier_intervals", cfg.numerics.grid.intervals},
                  {"wannier_sites", cfg.numerics.grid.sites}};
  if (cfg.feshbach) j["feshbach"] = feshbach_to_json(*cfg.feshbach);
  j["grids"] = {{"v0", cfg.v0_grid}, {"as", cfg.as_grid}, {"b", cfg.b_grid}};
  j["seed"] = cfg.seed;
  return j;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      fail(ErrorKind::InvalidParameter, "bad grid value '" + s + "'");
    }
    return v;
  };
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(number(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    require(c2 != std::string::npos, "range must be start:stop:step");
    const double start = number(item.substr(0, c1));
    const double stop = number(item.substr(c1 + 1, c2 - c1 - 1));
    const double step = number(item.substr(c2 + 1));
    require(step > 0 && stop >= start, "range needs step > 0 and stop >= start");
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    require(n < 1000000, "range too long");
    for (long i = 0; i <= n; ++i) out.push_back(start + step * i);
  }
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ChainConfig chain_from_json(const nlohmann::json& j, const UnitSystem& units) {
  ChainConfig cfg;
  try {
    cfg.L = j.at("L").get<int>();
    cfg.N = j.at("N").get<int>();
    cfg.n_max = j.value("n_max", 3);
    cfg.periodic = j.value("periodic", false);

    const auto& in = j.at("interaction");
    const std::string mode = in.value("mode", std::string("uniform"));
    std::optional<double> lattice_v0, lattice_as;
    UModel model = UModel::Born;
    if (mode == "uniform") {
      cfg.ladder = uniform_ladder(in.at("U").get<double>(), cfg.n_max);
    } else if (mode == "ladder") {
      cfg.ladder.energies = in.at("energies").get<std::vector<double>>();
      cfg.ladder.regularized = true;
      require(cfg.ladder.energies.size() >= 2, "ladder needs E_0 and E_1");
    } else if (mode == "lattice") {
      lattice_v0 = in.at("V0").get<double>();
      lattice_as = in.at("as").get<double>();
      model = parse_u_model(in.value("model", std::string("regularized")));
      const GapMode gm = parse_gap_mode(in.value("gap_mode", std::string("harmonic")));
      const auto extra = in.value("extra_energies", std::vector<double>{});
      const LatticeSite site = analyze_site(*lattice_v0, units);
      cfg.ladder = lattice_ladder(make_rescaling(site, gm, units), *lattice_as,
                                  model, units, cfg.n_max, extra);
    } else {
      fail(ErrorKind::InvalidParameter, "unknown interaction mode '" + mode + "'");
    }

    if (j.contains("J")) {
      cfg.J = j["J"].get<double>();
    } else if (j.contains("U_over_J")) {
      const double ratio = j["U_over_J"].get<double>();
      require(ratio > 0, "U_over_J must be positive");
      cfg.J = cfg.interaction_scale() / ratio;
    } else {
      fail(ErrorKind::InvalidParameter, "chain config needs J or U_over_J");
    }

    if (j.contains("trap")) {
      cfg.trap.kappa = j["trap"].value("kappa", 0.0);
      if (j["trap"].contains("center")) cfg.trap.center = j["trap"]["center"].get<double>();
    }

    const auto drive = j.value("drive", nlohmann::json::object());
    cfg.drive.V0 = drive.value("V0", lattice_v0.value_or(20.0));
    cfg.drive.amplitude_fraction = drive.value("amplitude_fraction", 0.2);
    cfg.drive.duration_cycles = drive.value("cycles", 40);
    if (drive.contains("eta")) cfg.drive.eta = drive["eta"].get<double>();
    if (drive.contains("coupling")) {
      const auto& c = drive["coupling"];
      cfg.drive.coupling.dlogJ = c.at("dlogJ").get<double>();
      cfg.drive.coupling.dlogE = c.at("dlogE").get<std::vector<double>>();
    } else {
      const double as = drive.value("as", lattice_as.value_or(-1.0));
      require(as >= 0, "drive needs a coupling or a scattering length to derive one");
      const UModel dm = parse_u_model(drive.value(
          "model", std::string(model == UModel::Born ? "born" : "regularized")));
      cfg.drive.coupling = drive_from_lattice(cfg.drive.V0, as, dm, units);
    }
    // Entries beyond n = 3 inherit the three-body derivative.
    auto& dl = cfg.drive.coupling.dlogE;
    while (static_cast<int>(dl.size()) <= cfg.n_max) dl.push_back(dl.empty() ? 0.0 : dl.back());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidParameter, std::string("invalid chain config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ChainConfig load_chain(const std::string& path, const UnitSystem& units) {
  return chain_from_json(read_json(path), units);
}

}  // namespace mottlab
