#include "mottlab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mottlab/bands.hpp"
#include "mottlab/config.hpp"
#include "mottlab/csv.hpp"
#include "mottlab/ed.hpp"
#include "mottlab/errors.hpp"
#include "mottlab/feshbach.hpp"
#include "mottlab/figures.hpp"
#include "mottlab/fitting.hpp"
#include "mottlab/interaction.hpp"
#include "mottlab/phase.hpp"
#include "mottlab/parallel.hpp"
#include "mottlab/wannier.hpp"

namespace mottlab::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  long long seed = -1;
  std::optional<std::string> v0, as, b;
  std::string gap_mode = "harmonic";
  // bands
  int n_bands = 3;
  // feshbach
  std::string fixture;
  // phase
  std::string criterion = "paper_constant";
  std::string u_model = "born";
  int filling = 1;
  int coordination = 6;
  // ed
  std::string chain_path;
  double fmin = 0.0, fmax = 0.0;
  int nf = 401;
  std::string method = "golden";
  int cycles = 0;
  // fit
  std::string input;
  std::string model = "gauss";
  int peaks = 3;
  int curve_points = 500;
  // figs
  std::string figure;
};

std::vector<double> grid_or(const std::optional<std::string>& flag,
                            const std::vector<double>& fallback) {
  return flag ? parse_grid(*flag) : fallback;
}

void require_nonempty(const std::vector<double>& g, const std::string& name) {
  require(!g.empty(), "grid --" + name + " must not be empty");
}

// Emits to <out>/<name> when an output directory is set, else to stdout.
class Sink {
 public:
  Sink(std::string dir, std::ostream& fallback) : dir_(std::move(dir)), out_(fallback) {}

  void emit(const std::string& name, const std::string& content) {
    if (dir_.empty()) {
      out_ << content;
      return;
    }
    std::error_code ec;
    fs::create_directories(dir_, ec);
    const fs::path p = fs::path(dir_) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) fail(ErrorKind::InvalidParameter, "cannot write " + p.string());
    f << content;
  }

 private:
  std::string dir_;
  std::ostream& out_;
};

std::string csv_string(const CsvTable& t, const std::string& hash) {
  std::ostringstream os;
  write_csv(os, t, hash);
  return os.str();
}

DataSeries read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidParameter, "cannot open " + path);
  DataSeries d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) continue;  // header row
    require(vals.size() >= 2, "fit input rows need x,y[,sigma]");
    d.x.push_back(vals[0]);
    d.y.push_back(vals[1]);
    if (vals.size() >= 3) d.sigma.push_back(vals[2]);
  }
  require(d.sigma.empty() || d.sigma.size() == d.x.size(),
          "sigma column must be present on every row or none");
  return d;
}

int finish(const CsvTable& t) { return t.flagged ? kExitNumerical : kExitOk; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Optical-lattice Bose-Hubbard parameters, multi-body on-site "
               "energies, transition points and modulation spectra", "mottlab"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "Global JSON config file");
  app.add_option("--out", o.out_dir, "Output directory (default: stdout)");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Random seed");

  auto grids = [&](CLI::App* sub, bool v0, bool as, bool b) {
    if (v0) sub->add_option("--v0", o.v0, "Lattice depths in E_R (list or start:stop:step)");
    if (as) sub->add_option("--as", o.as, "Scattering lengths in a0");
    if (b) sub->add_option("--b", o.b, "Magnetic fields in G");
  };

  auto* bands = app.add_subcommand("bands", "Bloch bands on the quasimomentum grid");
  grids(bands, true, false, false);
  bands->add_option("--bands", o.n_bands, "Number of bands");

  auto* hubbard = app.add_subcommand("hubbard", "Standard J and Born U(1)");
  grids(hubbard, true, true, false);

  auto* inter = app.add_subcommand("interactions", "U(2), 3U(3)-2U(2) and related resonances");
  grids(inter, true, true, false);
  inter->add_option("--gap-mode", o.gap_mode)->check(CLI::IsMember({"harmonic", "q0", "bz_mean"}));

  auto* fesh = app.add_subcommand("feshbach", "Scattering length versus field");
  grids(fesh, false, false, true);
  fesh->add_option("--fixture", o.fixture, "Feshbach JSON (overrides config)");

  auto* phase = app.add_subcommand("phase", "Critical lattice depth");
  grids(phase, false, true, false);
  phase->add_option("--criterion", o.criterion)
      ->check(CLI::IsMember({"paper_constant", "mean_field_lobe", "qmc_constant"}));
  phase->add_option("--u-model", o.u_model)->check(CLI::IsMember({"born", "regularized"}));
  phase->add_option("--filling", o.filling);
  phase->add_option("--z", o.coordination);

  auto* ed = app.add_subcommand("ed", "Exact diagonalization of a trapped chain");
  ed->add_option("--chain", o.chain_path, "Chain JSON")->required();
  ed->add_option("--fmin", o.fmin, "Lowest h f in E_R");
  ed->add_option("--fmax", o.fmax, "Highest h f in E_R (default 3 E_2)");
  ed->add_option("--nf", o.nf, "Frequency points")->check(CLI::PositiveNumber);
  ed->add_option("--method", o.method)->check(CLI::IsMember({"golden", "time"}));
  ed->add_option("--cycles", o.cycles, "Modulation cycles for --method time");

  auto* fit = app.add_subcommand("fit", "Gaussian or kink fit of x,y[,sigma] data");
  fit->add_option("--input", o.input, "CSV input")->required();
  fit->add_option("--model", o.model)->check(CLI::IsMember({"gauss", "kink"}));
  fit->add_option("--peaks", o.peaks);
  fit->add_option("--curve-points", o.curve_points);

  auto* figs = app.add_subcommand("figs", "Figure reproduction pipelines");
  figs->add_option("figure", o.figure)->required()
      ->check(CLI::IsMember({"fig1d", "fig2b", "fig4a", "fig4b"}));
  grids(figs, true, true, false);
  figs->add_option("--gap-mode", o.gap_mode)->check(CLI::IsMember({"harmonic", "q0", "bz_mean"}));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
    if (o.jobs > 0) cfg.jobs = o.jobs;
    if (o.seed >= 0) cfg.seed = static_cast<unsigned>(o.seed);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    const UnitSystem units = cfg.units();
    Sink sink(cfg.out_dir, out);
    nlohmann::json desc = describe(cfg);

    auto hash_with = [&](const std::string& sub, const nlohmann::json& extra) {
      nlohmann::json j = desc;
      j["subcommand"] = sub;
      j["args"] = extra;
      return fnv1a_hex(j.dump());
    };

    if (*bands) {
      const auto v0 = grid_or(o.v0, cfg.v0_grid);
      require(v0.size() == 1, "bands needs exactly one --v0 value");
      LatticeConfig lc;
      lc.depth_ER = v0[0];
      lc.wavelength = cfg.wavelength;
      lc.planewave_cutoff = cfg.numerics.planewave_cutoff;
      lc.q_grid = cfg.numerics.q_grid;
      const BandStructure bs = solve_bands(lc, o.n_bands);
      CsvTable t;
      t.header.push_back("q_over_k");
      for (int b = 0; b < o.n_bands; ++b) t.header.push_back("E" + std::to_string(b));
      for (int i = 0; i < bs.n_q(); ++i) {
        std::vector<double> row{bs.q()[i]};
        for (int b = 0; b < o.n_bands; ++b) row.push_back(bs.energy(b, i));
        t.rows.push_back(row);
      }
      sink.emit("bands.csv", csv_string(t, hash_with("bands", {v0, o.n_bands})));
      return kExitOk;
    }

    if (*hubbard || *inter) {
      const auto v0 = grid_or(o.v0, cfg.v0_grid);
      const auto as = grid_or(o.as, cfg.as_grid);
      require_nonempty(v0, "v0");
      require_nonempty(as, "as");
      const GapMode gm = parse_gap_mode(o.gap_mode);
      // One band/Wannier solve per depth, shared across scattering lengths.
      std::vector<LatticeSite> sites(v0.size());
      std::vector<std::optional<Error>> site_errors(v0.size());
      parallel_for(v0.size(), cfg.jobs, [&](std::size_t i) {
        try {
          sites[i] = analyze_site(v0[i], units, cfg.numerics);
        } catch (const Error& e) {
          site_errors[i] = e;
        }
      });
      // Bad input aborts the run; numerical trouble only flags its rows.
      for (const auto& e : site_errors) {
        if (e && !e->is_numerical()) throw *e;
      }
      auto site_of = [&](double v) -> const LatticeSite& {
        const auto i = static_cast<std::size_t>(std::find(v0.begin(), v0.end(), v) - v0.begin());
        if (site_errors[i]) throw *site_errors[i];
        return sites[i];
      };
      CsvTable t;
      if (*hubbard) {
        t = sweep({v0, as}, {"V0_ER", "aS_a0", "J_ER", "U1_ER", "U_over_J", "U1_kHz"},
                  cfg.jobs, [&](const std::vector<double>& p) {
                    const auto hp = hubbard_params(site_of(p[0]), p[1], units);
                    return std::vector<double>{p[0], p[1], hp.J, hp.U1_born,
                                               hp.U1_born / hp.J,
                                               units.er_to_khz(hp.U1_born)};
                  });
        sink.emit("hubbard.csv", csv_string(t, hash_with("hubbard", {v0, as})));
      } else {
        t = sweep({v0, as},
                  {"V0_ER", "aS_a0", "U1_ER", "U2_ER", "R1_ER", "edge_ER", "U1_kHz",
                   "U2_kHz", "R1_kHz"},
                  cfg.jobs, [&](const std::vector<double>& p) {
                    const auto r = make_rescaling(site_of(p[0]), gm, units);
                    const auto pr = resonance_predictions(r, p[1], units);
                    return std::vector<double>{p[0], p[1], pr.U1, pr.R2, pr.R1, pr.edge,
                                               units.er_to_khz(pr.U1),
                                               units.er_to_khz(pr.R2),
                                               units.er_to_khz(pr.R1)};
                  });
        sink.emit("interactions.csv",
                  csv_string(t, hash_with("interactions", {v0, as, o.gap_mode})));
      }
      return finish(t);
    }

    if (*fesh) {
      FeshbachConfig fc;
      if (!o.fixture.empty()) {
        fc = load_feshbach(o.fixture);
      } else if (cfg.feshbach) {
        fc = *cfg.feshbach;
      } else {
        fail(ErrorKind::InvalidParameter, "feshbach needs --fixture or a config entry");
      }
      const auto b = grid_or(o.b, cfg.b_grid);
      require_nonempty(b, "b");
      const CsvTable t = sweep({b}, {"B_G", "aS_a0"}, cfg.jobs,
                               [&](const std::vector<double>& p) {
                                 return std::vector<double>{p[0], a_s_of_B(fc, p[0]).a_s};
                               });
      sink.emit("feshbach.csv", csv_string(t, hash_with("feshbach", {b, feshbach_to_json(fc)})));
      return finish(t);
    }

    if (*phase) {
      const auto as = grid_or(o.as, cfg.as_grid);
      require_nonempty(as, "as");
      CriticalCriterion crit{parse_criterion(o.criterion), o.filling, o.coordination};
      critical_ratio(crit);
      const UModel um = parse_u_model(o.u_model);
      const CsvTable t = sweep({as}, {"aS_a0", "Vc_ER", "U_ER", "J_ER", "ratio"}, cfg.jobs,
                               [&](const std::vector<double>& p) {
                                 const auto tp = critical_depth(p[0], crit, um, units,
                                                                cfg.numerics);
                                 return std::vector<double>{p[0], tp.V_C, tp.U, tp.J,
                                                            tp.ratio_value};
                               });
      sink.emit("phase.csv", csv_string(t, hash_with("phase", {as, o.criterion, o.u_model,
                                                               o.filling, o.coordination})));
      return finish(t);
    }

    if (*ed) {
      const ChainConfig chain = load_chain(o.chain_path, units);
      const double top = o.fmax > 0 ? o.fmax : 3.0 * std::max(chain.interaction_scale(), 1e-3);
      require(top > o.fmin && o.fmin >= 0, "need 0 <= fmin < fmax");
      std::vector<double> freqs(o.nf);
      for (int i = 0; i < o.nf; ++i) {
        freqs[i] = o.nf == 1 ? o.fmin : o.fmin + (top - o.fmin) * i / (o.nf - 1);
      }
      SpectrumResult s;
      if (o.method == "golden") {
        s = golden_rule_spectrum(chain, freqs);
      } else {
        const int cycles = o.cycles > 0 ? o.cycles : chain.drive.duration_cycles;
        s = absorption_spectrum(chain, freqs, cycles, cfg.jobs);
      }
      CsvTable t;
      t.header = {"f_ER", "f_kHz", "response"};
      for (std::size_t i = 0; i < freqs.size(); ++i) {
        t.rows.push_back({freqs[i], units.er_to_khz(freqs[i]), s.response[i]});
      }
      std::ifstream chain_in(o.chain_path);
      std::stringstream chain_text;
      chain_text << chain_in.rdbuf();
      sink.emit("ed.csv", csv_string(t, hash_with("ed", {chain_text.str(), o.fmin, top, o.nf,
                                                         o.method, o.cycles})));
      return kExitOk;
    }

    if (*fit) {
      const DataSeries data = read_series(o.input);
      nlohmann::json model;
      CsvTable curve;
      curve.header = {"x", "y_fit"};
      std::function<double(double)> f;
      if (o.model == "gauss") {
        FitOptions fo;
        fo.seed = cfg.seed;
        const GaussianModel gm = fit_gaussians(data, o.peaks, std::nullopt, fo);
        nlohmann::json peaks = nlohmann::json::array();
        for (std::size_t i = 0; i < gm.peaks.size(); ++i) {
          peaks.push_back({{"amplitude", gm.peaks[i].amplitude},
                           {"center", gm.peaks[i].center},
                           {"sigma", gm.peaks[i].sigma},
                           {"center_uncertainty", gm.center_uncertainty(i)}});
        }
        std::vector<std::vector<double>> cov(gm.covariance.rows());
        for (Eigen::Index r = 0; r < gm.covariance.rows(); ++r) {
          for (Eigen::Index c = 0; c < gm.covariance.cols(); ++c) cov[r].push_back(gm.covariance(r, c));
        }
        model = {{"model", "gauss"}, {"baseline", gm.baseline}, {"peaks", peaks},
                 {"covariance", cov}, {"converged", gm.converged},
                 {"residual_norm", gm.residual_norm}, {"iterations", gm.iterations},
                 {"restarts", gm.restarts}};
        f = [gm](double x) { return gm.evaluate(x); };
      } else {
        const KinkModel km = fit_kink(data);
        std::vector<std::vector<double>> cov(4);
        for (int r = 0; r < 4; ++r) for (int c = 0; c < 4; ++c) cov[r].push_back(km.covariance(r, c));
        model = {{"model", "kink"}, {"V_C", km.V_C}, {"V_C_uncertainty", std::sqrt(std::max(0.0, km.covariance(3, 3)))},
                 {"left_slope", km.left_slope}, {"right_slope", km.right_slope},
                 {"offset", km.offset}, {"covariance", cov}, {"converged", km.converged},
                 {"boundary_kink", km.boundary_kink}, {"warning", km.warning},
                 {"residual_norm", km.residual_norm}};
        f = [km](double x) { return km.evaluate(x); };
      }
      const int n = std::max(2, o.curve_points);
      for (int i = 0; i < n; ++i) {
        const double x = data.x.front() + (data.x.back() - data.x.front()) * i / (n - 1);
        curve.rows.push_back({x, f(x)});
      }
      const std::string hash = hash_with("fit", {o.input, o.model, o.peaks});
      if (cfg.out_dir.empty()) {
        out << model.dump(2) << "\n";
      } else {
        sink.emit("fit_model.json", model.dump(2) + "\n");
        sink.emit("fit_curve.csv", csv_string(curve, hash));
      }
      return kExitOk;
    }

    if (*figs) {
      const FigureId id = parse_figure(o.figure);
      const bool by_depth = id == FigureId::Fig2b;
      std::optional<std::vector<double>> override_grid;
      if (by_depth && o.v0) override_grid = parse_grid(*o.v0);
      if (!by_depth && o.as) override_grid = parse_grid(*o.as);
      if (!override_grid) {
        const auto& from_cfg = by_depth ? cfg.v0_grid : cfg.as_grid;
        if (!from_cfg.empty()) override_grid = from_cfg;
      }
      const FigureJob job = resolve_figure(id, override_grid ? &*override_grid : nullptr,
                                           parse_gap_mode(o.gap_mode));
      const CsvTable t = run_figure(job, cfg);
      sink.emit(std::string(figure_name(id)) + ".csv",
                csv_string(t, hash_with("figs", {o.figure, job.grid, o.gap_mode})));
      return finish(t);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_numerical() ? kExitNumerical : kExitValidation;
  }
  return kExitValidation;
}

}  // namespace mottlab::cli
