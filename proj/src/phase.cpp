#include "mottlab/phase.hpp"

#include <cmath>
#include <sstream>

#include "mottlab/errors.hpp"
#include "mottlab/parallel.hpp"

namespace mottlab {

CriterionMethod parse_criterion(const std::string& s) {
  if (s == "paper_constant") return CriterionMethod::PaperConstant;
  if (s == "mean_field_lobe") return CriterionMethod::MeanFieldLobe;
  if (s == "qmc_constant") return CriterionMethod::QmcConstant;
  fail(ErrorKind::InvalidParameter, "unknown criterion '" + s + "'");
}

const char* criterion_name(CriterionMethod m) {
  switch (m) {
    case CriterionMethod::PaperConstant: return "paper_constant";
    case CriterionMethod::MeanFieldLobe: return "mean_field_lobe";
    case CriterionMethod::QmcConstant: return "qmc_constant";
  }
  return "?";
}

double critical_ratio(const CriticalCriterion& c) {
  require(c.filling_n >= 1, "filling must be >= 1");
  require(c.coordination_z >= 1, "coordination number must be >= 1");
  switch (c.method) {
    case CriterionMethod::PaperConstant: return 34.8;
    case CriterionMethod::QmcConstant: return 29.3;
    case CriterionMethod::MeanFieldLobe: {
      const double n = c.filling_n;
      return c.coordination_z * (2.0 * n + 1.0 + 2.0 * std::sqrt(n * (n + 1.0)));
    }
  }
  fail(ErrorKind::InvalidParameter, "unknown criterion method");
}

namespace {

struct Evaluation {
  double U = 0.0;
  double J = 0.0;
};

Evaluation evaluate(double V0, double a_s, UModel model,
                    const UnitSystem& units, const LatticeNumerics& numerics) {
  const LatticeSite site = analyze_site(V0, units, numerics);
  Evaluation e;
  e.J = site.J;
  if (model == UModel::Born) {
    e.U = u_born_from_overlap(site.overlap, a_s, units);
  } else {
    e.U = u2_lattice(make_rescaling(site, GapMode::Harmonic, units), a_s, units);
  }
  return e;
}

}  // namespace

TransitionPoint critical_depth(double a_s_a0, const CriticalCriterion& c,
                               UModel u_model, const UnitSystem& units,
                               const LatticeNumerics& numerics,
                               DepthBracket bracket) {
  require(a_s_a0 > 0, "critical depth needs a positive scattering length");
  require(bracket.hi > bracket.lo && bracket.lo > 0, "invalid depth bracket");
  const double ratio = critical_ratio(c);
  // Work with log(U/J) - log(ratio); monotonic in V0.
  auto f = [&](double V0, Evaluation& e) {
    e = evaluate(V0, a_s_a0, u_model, units, numerics);
    return std::log(e.U / e.J) - std::log(ratio);
  };
  Evaluation e_lo, e_hi, e_mid;
  double lo = bracket.lo, hi = bracket.hi;
  const double f_lo = f(lo, e_lo);
  const double f_hi = f(hi, e_hi);
  if (!(f_lo < 0 && f_hi > 0)) {
    std::ostringstream os;
    os << "U/J - " << ratio << " has no sign change on [" << lo << ", " << hi
       << "] E_R for a_s = " << a_s_a0 << " a0";
    fail(ErrorKind::OutOfBracket, os.str());
  }
  double mid = 0.5 * (lo + hi);
  double f_mid = 0.0;
  for (int it = 0; it < 60; ++it) {
    mid = 0.5 * (lo + hi);
    f_mid = f(mid, e_mid);
    if (std::abs(f_mid) < 1e-6 || hi - lo < 1e-7) break;
    if (f_mid < 0) lo = mid; else hi = mid;
  }
  TransitionPoint tp;
  tp.a_s = a_s_a0;
  tp.V_C = mid;
  tp.U = e_mid.U;
  tp.J = e_mid.J;
  tp.ratio_value = ratio;
  tp.criterion = c;
  tp.u_model = u_model;
  return tp;
}

std::vector<CurvePoint> vc_curve(const std::vector<double>& a_s_grid,
                                 const CriticalCriterion& c, UModel u_model,
                                 const UnitSystem& units, int jobs,
                                 const LatticeNumerics& numerics) {
  std::vector<CurvePoint> out(a_s_grid.size());
  parallel_for(a_s_grid.size(), jobs, [&](std::size_t i) {
    out[i].a_s = a_s_grid[i];
    try {
      out[i].point = critical_depth(a_s_grid[i], c, u_model, units, numerics);
    } catch (const Error& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace mottlab
