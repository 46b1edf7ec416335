#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/eigen.h>

#include "mottlab/bands.hpp"
#include "mottlab/ed.hpp"
#include "mottlab/errors.hpp"
#include "mottlab/feshbach.hpp"
#include "mottlab/fitting.hpp"
#include "mottlab/interaction.hpp"
#include "mottlab/phase.hpp"
#include "mottlab/units.hpp"
#include "mottlab/wannier.hpp"
#include "mottlab/config.hpp"

namespace py = pybind11;
using namespace mottlab;

namespace {

UnitSystem units_for(double wavelength_nm, double mass_u) {
  PhysicalConstants c;
  return make_units(wavelength_nm * 1e-9, mass_u * c.atomic_mass_unit, c);
}

}  // namespace

PYBIND11_MODULE(_mottlab, m) {
  m.doc() = "Optical-lattice Bose-Hubbard toolkit";
  m.attr("__version__") = MOTTLAB_VERSION;

  static py::exception<Error> base(m, "MottlabError", PyExc_ValueError);
  static py::exception<Error> numerical(m, "NumericalError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(e.is_numerical() ? numerical : base, e.what());
    }
  });

  py::enum_<GapMode>(m, "GapMode")
      .value("HARMONIC", GapMode::Harmonic)
      .value("ZONE_CENTER", GapMode::ZoneCenter)
      .value("ZONE_MEAN", GapMode::ZoneMean);
  py::enum_<UModel>(m, "UModel")
      .value("BORN", UModel::Born)
      .value("REGULARIZED", UModel::Regularized);
  py::enum_<CriterionMethod>(m, "Criterion")
      .value("PAPER_CONSTANT", CriterionMethod::PaperConstant)
      .value("MEAN_FIELD_LOBE", CriterionMethod::MeanFieldLobe)
      .value("QMC_CONSTANT", CriterionMethod::QmcConstant);

  py::class_<UnitSystem>(m, "Units")
      .def(py::init(&units_for), py::arg("wavelength_nm") = 1064.5,
           py::arg("mass_u") = 132.905451931)
      .def_readonly("recoil_energy", &UnitSystem::recoil_energy_ER)
      .def_readonly("recoil_frequency_Hz", &UnitSystem::recoil_frequency_Hz)
      .def_readonly("lattice_spacing", &UnitSystem::lattice_spacing_d)
      .def("er_to_khz", &UnitSystem::er_to_khz)
      .def("khz_to_er", &UnitSystem::khz_to_er)
      .def("a0_to_ka", &UnitSystem::a0_to_ka);

  m.def("bands", [](double V0, int n_bands, int cutoff, int q_grid) {
        LatticeConfig lc;
        lc.depth_ER = V0;
        lc.planewave_cutoff = cutoff;
        lc.q_grid = q_grid;
        const auto bs = solve_bands(lc, n_bands);
        Eigen::MatrixXd e(n_bands, bs.n_q());
        for (int b = 0; b < n_bands; ++b)
          for (int i = 0; i < bs.n_q(); ++i) e(b, i) = bs.energy(b, i);
        return py::make_tuple(bs.q(), e);
      },
      py::arg("V0"), py::arg("n_bands") = 3, py::arg("cutoff") = 41, py::arg("q_grid") = 101,
      "Quasimomenta q/k and band energies (n_bands x n_q) in E_R.");

  py::class_<LatticeSite>(m, "LatticeSite")
      .def_readonly("V0", &LatticeSite::V0)
      .def_readonly("J", &LatticeSite::J)
      .def_readonly("J_fourier", &LatticeSite::J_fourier)
      .def_readonly("overlap", &LatticeSite::overlap)
      .def("gap", &LatticeSite::gap);
  m.def("analyze_site", [](double V0, const UnitSystem& u) { return analyze_site(V0, u); },
        py::arg("V0"), py::arg("units") = default_units());

  py::class_<HubbardParams>(m, "HubbardParams")
      .def_readonly("J", &HubbardParams::J)
      .def_readonly("U1", &HubbardParams::U1_born)
      .def_readonly("V0", &HubbardParams::V0)
      .def_readonly("a_s", &HubbardParams::a_s);
  m.def("hubbard", [](double V0, double a_s, const UnitSystem& u) {
        return hubbard_params(analyze_site(V0, u), a_s, u);
      },
      py::arg("V0"), py::arg("a_s"), py::arg("units") = default_units());

  py::class_<BuschSolution>(m, "BuschSolution")
      .def_readonly("nu", &BuschSolution::nu)
      .def_readonly("E_rel", &BuschSolution::E_rel)
      .def_readonly("delta_E", &BuschSolution::delta_E)
      .def_readonly("residual", &BuschSolution::residual);
  m.def("busch_energy", &busch_energy, py::arg("a_ratio"));

  m.def("u2", [](double V0, double a_s, const UnitSystem& u) { return u2_lattice(V0, a_s, u); },
        py::arg("V0"), py::arg("a_s"), py::arg("units") = default_units());
  m.def("u3_combination", [](double u2, double gap) {
        const auto t = u3_combination(u2, gap);
        return py::make_tuple(t.combination, t.u3);
      },
      py::arg("u2"), py::arg("gap"));

  py::class_<ResonancePredictions>(m, "Resonances")
      .def_readonly("R2", &ResonancePredictions::R2)
      .def_readonly("R1", &ResonancePredictions::R1)
      .def_readonly("R1_pert", &ResonancePredictions::R1_pert)
      .def_readonly("edge", &ResonancePredictions::edge)
      .def_readonly("half", &ResonancePredictions::half)
      .def_readonly("U1", &ResonancePredictions::U1)
      .def_readonly("twoU1", &ResonancePredictions::twoU1);
  m.def("resonances", [](double V0, double a_s, GapMode gm, bool khz, const UnitSystem& u) {
        const auto r = make_rescaling(analyze_site(V0, u), gm, u);
        const auto p = resonance_predictions(r, a_s, u);
        return khz ? to_khz(p, u) : p;
      },
      py::arg("V0"), py::arg("a_s"), py::arg("gap_mode") = GapMode::Harmonic,
      py::arg("khz") = false, py::arg("units") = default_units());

  py::class_<FeshbachConfig>(m, "Feshbach")
      .def_static("load", &load_feshbach)
      .def("a_s", [](const FeshbachConfig& c, double B) { return a_s_of_B(c, B).a_s; })
      .def("B_of_a_s", [](const FeshbachConfig& c, double a, double lo, double hi) {
        return B_of_a_s(c, a, {lo, hi});
      });

  py::class_<TransitionPoint>(m, "TransitionPoint")
      .def_readonly("a_s", &TransitionPoint::a_s)
      .def_readonly("V_C", &TransitionPoint::V_C)
      .def_readonly("U", &TransitionPoint::U)
      .def_readonly("J", &TransitionPoint::J)
      .def_readonly("ratio", &TransitionPoint::ratio_value);
  m.def("critical_ratio", [](CriterionMethod c, int n, int z) {
        return critical_ratio({c, n, z});
      },
      py::arg("criterion") = CriterionMethod::PaperConstant, py::arg("filling") = 1,
      py::arg("z") = 6);
  m.def("critical_depth", [](double a_s, CriterionMethod c, UModel um, const UnitSystem& u) {
        return critical_depth(a_s, {c, 1, 6}, um, u);
      },
      py::arg("a_s"), py::arg("criterion") = CriterionMethod::PaperConstant,
      py::arg("u_model") = UModel::Born, py::arg("units") = default_units());

  m.def("ed_spectrum", [](const std::string& chain_path, const std::vector<double>& freqs,
                          const std::string& method, int jobs, const UnitSystem& u) {
        const ChainConfig c = load_chain(chain_path, u);
        const SpectrumResult s = method == "time"
            ? absorption_spectrum(c, freqs, c.drive.duration_cycles, jobs)
            : golden_rule_spectrum(c, freqs);
        return s.response;
      },
      py::arg("chain_path"), py::arg("freqs"), py::arg("method") = "golden",
      py::arg("jobs") = 1, py::arg("units") = default_units(),
      "Modulation response of a chain config on a grid of h f in E_R.");
  m.def("chain_eigenvalues", [](const std::string& chain_path, const UnitSystem& u) {
        return chain_spectrum(load_chain(chain_path, u));
      },
      py::arg("chain_path"), py::arg("units") = default_units());

  m.def("fit_gaussians", [](std::vector<double> x, std::vector<double> y, int k) {
        DataSeries d{std::move(x), std::move(y), {}};
        const auto g = fit_gaussians(d, k);
        py::list peaks;
        for (std::size_t i = 0; i < g.peaks.size(); ++i) {
          py::dict p;
          p["amplitude"] = g.peaks[i].amplitude;
          p["center"] = g.peaks[i].center;
          p["sigma"] = g.peaks[i].sigma;
          p["center_uncertainty"] = g.center_uncertainty(i);
          peaks.append(p);
        }
        py::dict out;
        out["baseline"] = g.baseline;
        out["peaks"] = peaks;
        out["converged"] = g.converged;
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("peaks"));
  m.def("fit_kink", [](std::vector<double> x, std::vector<double> y) {
        DataSeries d{std::move(x), std::move(y), {}};
        const auto k = fit_kink(d);
        py::dict out;
        out["V_C"] = k.V_C;
        out["left_slope"] = k.left_slope;
        out["right_slope"] = k.right_slope;
        out["offset"] = k.offset;
        out["boundary_kink"] = k.boundary_kink;
        return out;
      },
      py::arg("x"), py::arg("y"));
}
