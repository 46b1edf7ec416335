#pragma once

#include <string>
#include <vector>

#include "mottlab/bands.hpp"
#include "mottlab/config.hpp"
#include "mottlab/csv.hpp"

namespace mottlab {

enum class FigureId { Fig1d, Fig2b, Fig4a, Fig4b };

FigureId parse_figure(const std::string& s);
const char* figure_name(FigureId id);

/// A figure reproduction with its resolved grid.
struct FigureJob {
  FigureId id = FigureId::Fig4a;
  std::vector<double> grid;  // a_s for fig1d/fig4*, V0 for fig2b
  double fixed_V0 = 0.0;     // fig4a: 20, fig4b: 25
  double fixed_as = 0.0;     // fig2b: 212
  GapMode gap_mode = GapMode::Harmonic;
};

/// Fills in default grids; an explicitly empty grid is a validation error.
FigureJob resolve_figure(FigureId id, const std::vector<double>* grid_override,
                         GapMode gap_mode = GapMode::Harmonic);

CsvTable run_figure(const FigureJob& job, const RunConfig& cfg);

}  // namespace mottlab
