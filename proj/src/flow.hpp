#pragma once

// Mass-constrained descent shared by the planar solvers and the hybrid
// minimizer: preconditioned gradient steps (with Polak-Ribiere momentum),
// backtracking on the energy, and rescaling back to the mass sphere.

#include "hnls/functionals.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hnls::detail {

struct FlowBlocks {
  bool u = true;
  bool phi = true;
  bool q = true;
};

struct FlowOptions {
  int max_iterations = 20000;
  double tolerance = 1e-8;
  double armijo = 1e-4;
  bool momentum = true;
  double q_min_step_scale = 1e-3;
  // called every `monitor_every` iterations; returning true stops the flow
  std::function<bool(const HybridState&, double energy, int iteration)> monitor;
  int monitor_every = 50;
};

struct FlowResult {
  HybridState state;
  double energy = 0.0;
  double kappa = 0.0;  // multiplier: gradient ~ kappa * mass gradient
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stopped_by_monitor = false;
  bool monotone = true;
};

/// Rescale the whole state by one positive factor so that mass == mu.
HybridState project_mass(const HybridState& s, double mu);

/// kappa in gradient ~ kappa * mass gradient for an arbitrary state, from the
/// unit-shift preconditioned projection (all blocks active).
double multiplier(const HybridState& s, const Params& prm);

FlowResult run_flow(HybridState x, const Params& prm, const FlowBlocks& blocks, const FlowOptions& opt);

}  // namespace hnls::detail
