#include "mottlab/figures.hpp"

#include "mottlab/errors.hpp"
#include "mottlab/interaction.hpp"
#include "mottlab/phase.hpp"

namespace mottlab {

FigureId parse_figure(const std::string& s) {
  if (s == "fig1d") return FigureId::Fig1d;
  if (s == "fig2b") return FigureId::Fig2b;
  if (s == "fig4a") return FigureId::Fig4a;
  if (s == "fig4b") return FigureId::Fig4b;
  fail(ErrorKind::InvalidParameter, "unknown figure '" + s + "'");
}

const char* figure_name(FigureId id) {
  switch (id) {
    case FigureId::Fig1d: return "fig1d";
    case FigureId::Fig2b: return "fig2b";
    case FigureId::Fig4a: return "fig4a";
    case FigureId::Fig4b: return "fig4b";
  }
  return "?";
}

FigureJob resolve_figure(FigureId id, const std::vector<double>* grid_override,
                         GapMode gap_mode) {
  FigureJob job;
  job.id = id;
  job.gap_mode = gap_mode;
  switch (id) {
    case FigureId::Fig1d:
      job.grid = parse_grid("100:900:50");
      break;
    case FigureId::Fig2b:
      job.grid = parse_grid("10:30:1");
      job.fixed_as = 212.0;
      break;
    case FigureId::Fig4a:
      job.grid = parse_grid("200:900:10");
      job.fixed_V0 = 20.0;
      break;
    case FigureId::Fig4b:
      job.grid = parse_grid("200:900:10");
      job.fixed_V0 = 25.0;
      break;
  }
  if (grid_override) {
    require(!grid_override->empty(), std::string(figure_name(id)) + " needs a nonempty grid");
    job.grid = *grid_override;
  }
  return job;
}

CsvTable run_figure(const FigureJob& job, const RunConfig& cfg) {
  const UnitSystem units = cfg.units();
  switch (job.id) {
    case FigureId::Fig1d: {
      CriticalCriterion crit;
      return sweep({job.grid}, {"aS_a0", "Vc_ER", "U_ER", "J_ER", "ratio"}, cfg.jobs,
                   [&](const std::vector<double>& p) {
                     const auto tp = critical_depth(p[0], crit, UModel::Born, units,
                                                    cfg.numerics);
                     return std::vector<double>{p[0], tp.V_C, tp.U, tp.J, tp.ratio_value};
                   });
    }
    case FigureId::Fig2b: {
      return sweep({job.grid}, {"V0_ER", "U1_kHz", "twoU1_kHz", "U2_kHz"}, cfg.jobs,
                   [&](const std::vector<double>& p) {
                     const LatticeSite site = analyze_site(p[0], units, cfg.numerics);
                     const auto r = make_rescaling(site, job.gap_mode, units);
                     const auto k = to_khz(resonance_predictions(r, job.fixed_as, units), units);
                     return std::vector<double>{p[0], k.U1, k.twoU1, k.R2};
                   });
    }
    case FigureId::Fig4a:
    case FigureId::Fig4b: {
      const LatticeSite site = analyze_site(job.fixed_V0, units, cfg.numerics);
      const auto r = make_rescaling(site, job.gap_mode, units);
      return sweep({job.grid},
                   {"aS_a0", "U1_kHz", "twoU1_kHz", "U2_kHz", "R1_kHz", "R1_pert_kHz"},
                   cfg.jobs, [&](const std::vector<double>& p) {
                     const auto k = to_khz(resonance_predictions(r, p[0], units), units);
                     return std::vector<double>{p[0], k.U1, k.twoU1, k.R2, k.R1, k.R1_pert};
                   });
    }
  }
  fail(ErrorKind::InvalidParameter, "unknown figure");
}

}  // namespace mottlab
