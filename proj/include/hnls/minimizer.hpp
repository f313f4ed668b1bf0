#pragma once

// Mass-constrained minimization of the hybrid energy from several seeds, with
// detection of mass running off along the half-line.

#include "hnls/functionals.hpp"

#include <string>
#include <vector>

namespace hnls {

struct Grids {
  HalfLineGrid half{};
  RadialGrid radial{};
};

struct SolverOptions {
  int max_iterations = 20000;
  double tolerance = 1e-8;  // projected gradient norm relative to 1 + |E|
  double armijo = 1e-4;
  bool momentum = true;
  // Escape: at least escape_mass_fraction of the mass lies beyond
  // escape_fraction * L and the energy is within escape_energy_tolerance
  // (relative) of the soliton level.
  double escape_fraction = 0.35;
  double escape_mass_fraction = 0.9;
  double escape_energy_tolerance = 1e-3;
  int monitor_every = 50;
};

void validate(const SolverOptions& opt);

enum class MinimizerStatus { Converged, EscapedHalfline, MaxIterations };
std::string to_string(MinimizerStatus s);

struct SeedOutcome {
  std::string label;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  MinimizerStatus status = MinimizerStatus::MaxIterations;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool monotone = true;
};

struct MinimizerReport {
  HybridState state;
  double energy = 0.0;
  double omega_star = 0.0;  // (P_p + P_r - Q) / mass
  double multiplier = 0.0;  // omega from the projected gradient, -2 kappa
  MinimizerStatus status = MinimizerStatus::MaxIterations;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::string seed_label;
  double soliton_level = 0.0;
  double escape_mass_fraction = 0.0;  // of the winning state, beyond the drift threshold
  bool monotone = true;
  std::vector<SeedOutcome> seeds;
};

MinimizerReport minimize_energy(const Params& prm, const Grids& grids = {}, const SolverOptions& opt = {});

double omega_star(const HybridState& s, const Params& prm);

/// Discrete L^2 norm of -u'' + omega u - |u|^{p-2} u over interior half-line nodes.
double halfline_el_residual(const HybridState& s, const Params& prm, double omega);

/// Multiply by the phase that makes q real >= 0 (u(0) when q = 0).
HybridState phase_gauge(const HybridState& s);

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct Verification {
  std::vector<Check> checks;
  bool all_passed() const;
};

Verification verify_ground_state(const MinimizerReport& rep, const Params& prm);
/// Same checks on an arbitrary state, with omega taken from its projected gradient.
Verification verify_state(const HybridState& s, const Params& prm);

}  // namespace hnls
