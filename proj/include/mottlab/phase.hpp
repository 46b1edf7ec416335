#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mottlab/interaction.hpp"
#include "mottlab/units.hpp"
#include "mottlab/wannier.hpp"

namespace mottlab {

enum class CriterionMethod { PaperConstant, MeanFieldLobe, QmcConstant };

CriterionMethod parse_criterion(const std::string& s);
const char* criterion_name(CriterionMethod m);

struct CriticalCriterion {
  CriterionMethod method = CriterionMethod::PaperConstant;
  int filling_n = 1;
  int coordination_z = 6;
};

/// Critical U/J: 34.8 (mean-field value for the cubic lattice), 29.3
/// (quantum Monte Carlo), or the mean-field lobe tip z(2n+1+2 sqrt(n(n+1))).
double critical_ratio(const CriticalCriterion& c);

struct TransitionPoint {
  double a_s = 0.0;   // a0
  double V_C = 0.0;   // E_R
  double U = 0.0;     // E_R at V_C
  double J = 0.0;     // E_R at V_C
  double ratio_value = 0.0;
  CriticalCriterion criterion;
  UModel u_model = UModel::Born;
};

struct DepthBracket {
  double lo = 1.0;
  double hi = 35.0;
};

TransitionPoint critical_depth(double a_s_a0, const CriticalCriterion& c,
                               UModel u_model, const UnitSystem& units,
                               const LatticeNumerics& numerics = {},
                               DepthBracket bracket = {});

struct CurvePoint {
  double a_s = 0.0;
  std::optional<TransitionPoint> point;
  std::string error;
};

std::vector<CurvePoint> vc_curve(const std::vector<double>& a_s_grid,
                                 const CriticalCriterion& c, UModel u_model,
                                 const UnitSystem& units, int jobs = 1,
                                 const LatticeNumerics& numerics = {});

}  // namespace mottlab
