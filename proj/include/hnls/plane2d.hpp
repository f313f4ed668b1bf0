#pragma once

// Radial planar problems: the free NLS constant tau_r and the ground state of
// the plane with a point interaction of strength rho.

#include "hnls/core.hpp"

namespace hnls {

/// Bottom of the spectrum of the planar point interaction: 4 exp(-4 pi rho - 2 gamma).
double omega_rho(double rho);

struct PlaneSolveOptions {
  RadialGrid grid{};
  int max_iterations = 20000;
  double tolerance = 1e-8;
};

struct TauEstimate {
  double value = 0.0;
  double error = 0.0;  // max(|tau(M) - tau(M/2)|, 1e-10 tau), used as a guard band
  int iterations = 0;
};

/// tau_r = -E of the unit-mass free planar ground state.
double tau_r(double r);
TauEstimate tau_r_estimate(double r, const PlaneSolveOptions& opt = {});
/// Free planar level (q frozen at 0) at mass mu, computed directly; R is enlarged
/// for slowly decaying states.
double free_plane_energy(double r, double mu, const PlaneSolveOptions& opt = {});

struct PlaneGroundState {
  RadialGrid grid{};  // as solved: R is enlarged when the state decays slower than 30 / R
  VecC phi;
  double q = 0.0;  // real and >= 0 after the phase gauge
  double energy = 0.0;
  double mass = 0.0;
  double lambda_used = 1.0;
  double omega = 0.0;  // Lagrange multiplier
  double gradient_norm = 0.0;
  int iterations = 0;
  int seed = 0;  // 0: Green seed, 1: soliton seed

  /// |v| at the grid nodes (node 0 holds the regular part only, which is +inf
  /// physically; reported as NaN).
  VecR modulus() const;
};

PlaneGroundState plane_ground_state(double r, double rho, double mu, const PlaneSolveOptions& opt = {});

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace hnls
