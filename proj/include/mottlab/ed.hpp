#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>
#include <vector>

#include "mottlab/basis.hpp"
#include "mottlab/interaction.hpp"
#include "mottlab/units.hpp"

namespace mottlab {

/// Response of the on-site parameters to the lattice depth, as logarithmic
/// derivatives d ln J / dV0 and d ln E_n / dV0 (per E_R).
struct DriveCoupling {
  double dlogJ = 0.0;
  std::vector<double> dlogE;  // indexed by occupation; entries 0, 1 unused
};

/// Central differences of the lattice parameters at V0 +- step.
DriveCoupling drive_from_lattice(double V0, double a_s_a0, UModel model,
                                 const UnitSystem& units, double step = 0.1);

struct DriveConfig {
  double V0 = 20.0;                 // E_R, sets the modulation depth
  double amplitude_fraction = 0.2;  // of V0
  int duration_cycles = 40;
  std::optional<double> eta;        // E_R; defaults to 0.05 U
  DriveCoupling coupling;
};

struct TrapConfig {
  double kappa = 0.0;             // E_R per site^2
  std::optional<double> center;   // defaults to the chain center
};

struct ChainConfig {
  int L = 4;
  int N = 4;
  int n_max = 3;
  double J = 0.0;  // E_R
  InteractionLadder ladder;
  bool periodic = false;
  TrapConfig trap;
  DriveConfig drive;

  void validate() const;
  double onsite_energy(int n) const;
  double trap_energy(int site) const;
  /// Interaction scale used for defaults: E_2.
  double interaction_scale() const;
  double broadening() const;
};

/// Dense-vs-iterative switch for ground_and_gap.
inline constexpr std::size_t kDenseLimit = 2000;

/// The pieces of the chain Hamiltonian on a basis:
/// H = J * hopping + diag(interaction + trap).
struct ChainOperators {
  Eigen::SparseMatrix<double> hopping;  // -sum (a+_i a_j + h.c.)
  Eigen::VectorXd interaction;
  Eigen::VectorXd trap;
  Eigen::VectorXd drive_diagonal;  // sum_i E(n_i) dlogE(n_i)
};

ChainOperators build_operators(const ChainConfig& cfg, const Basis& basis);
Eigen::SparseMatrix<double> build_hamiltonian(const ChainConfig& cfg,
                                              const Basis& basis);
/// Perturbation delta V0 * dH/dV0 for amplitude modulation.
Eigen::SparseMatrix<double> drive_operator(const ChainConfig& cfg,
                                           const ChainOperators& ops);

struct LanczosOptions {
  int n_eigen = 2;
  int max_iterations = 300;
  double tolerance = 1e-10;
  unsigned seed = 12345;
};

struct LanczosResult {
  std::vector<double> eigenvalues;
  Eigen::VectorXd ground_state;
  int iterations = 0;
};

/// Lanczos with full reorthogonalization for the lowest eigenpairs.
LanczosResult lanczos_lowest(const Eigen::SparseMatrix<double>& H,
                             const LanczosOptions& opts = {});

enum class EigenMethod { Auto, Dense, Iterative };

struct GroundAndGap {
  double E0 = 0.0;
  double gap = 0.0;
  std::size_t dimension = 0;
  bool dense = true;
};

GroundAndGap ground_and_gap(const ChainConfig& cfg,
                            EigenMethod method = EigenMethod::Auto);

/// All eigenvalues, ascending (dense path).
std::vector<double> chain_spectrum(const ChainConfig& cfg);

struct Transition {
  double energy = 0.0;  // E_x - E_0
  double weight = 0.0;  // |<x|W|0>|^2
};

enum class SpectrumMethod { GoldenRule, TimeEvolution };

struct SpectrumResult {
  std::vector<double> frequencies;  // h f in E_R
  std::vector<double> response;
  SpectrumMethod method = SpectrumMethod::GoldenRule;
  double ground_energy = 0.0;
  std::vector<Transition> transitions;  // golden rule only
};

SpectrumResult golden_rule_spectrum(const ChainConfig& cfg,
                                    const std::vector<double>& freq_grid);

struct Peak {
  double position = 0.0;  // grid maximum
  double height = 0.0;
  double line = 0.0;      // strongest transition within eta of the maximum
  double line_weight = 0.0;
};

/// Local maxima of the response above min_relative of the global maximum.
std::vector<Peak> find_peaks(const SpectrumResult& s, double eta,
                             double min_relative = 1e-3);

struct EvolutionOptions {
  int steps_per_cycle = 64;
};

/// Energy absorbed after n_cycles of V0(t) = V0 (1 + a sin(2 pi f t)),
/// measured with the static Hamiltonian. f_M is given as h f in E_R.
double time_evolution_absorption(const ChainConfig& cfg, double f_M,
                                 int n_cycles,
                                 const EvolutionOptions& opts = {});

SpectrumResult absorption_spectrum(const ChainConfig& cfg,
                                   const std::vector<double>& freq_grid,
                                   int n_cycles, int jobs = 1,
                                   const EvolutionOptions& opts = {});

}  // namespace mottlab
