#pragma once

// Negative eigenvalues of the linear hybrid operator: roots of the secular
// equation (alpha + s)(rho + (gamma - log 2 + log s)/(2 pi)) = beta^2 with
// nu = -s^2, their eigenfunctions, and residuals of the junction conditions.

#include "hnls/core.hpp"

#include <string>
#include <vector>

namespace hnls {

/// Bottom of the spectrum of the half-line Robin Laplacian: -alpha^2 if alpha < 0, else 0.
double least_eig_1d(double alpha);

/// Pole-cleared secular residual at nu < 0.
double eigen_residual(double nu, const Params& prm);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending, all < 0
  // log sqrt(-ell), same order. Stays exact when ell itself underflows (alpha
  // slightly negative puts the upper eigenvalue near -exp(-4 pi beta^2 / |alpha|));
  // such an ell is reported as -denorm_min.
  std::vector<double> log_decay;
  double e_lin = 0.0;               // -eigenvalues.front()
  double ell_alpha = 0.0;           // alpha^2 if alpha < 0, else 0
  double omega_rho = 0.0;
  std::string case_label;
};

SpectrumResult discrete_spectrum(const Params& prm);
double e_lin(const Params& prm);

/// Unit-mass eigenfunction for the eigenvalue ell: u = a exp(-sqrt(-ell) x),
/// v = c G_{-ell}, phi = 0 at lambda = -ell. For beta = 0 the decoupled
/// eigenvalues -omega_rho and -alpha^2 give purely planar or purely half-line
/// states.
HybridState eigenfunction(const Params& prm, double ell, const HalfLineGrid& hg = {}, const RadialGrid& rg = {});

struct BCResidual {
  double res1 = 0.0;  // |u'(0) - alpha u(0) + beta q|
  double res2 = 0.0;  // |phi_lambda(0) + beta u(0) - c(lambda) q|
};

/// Junction residuals with u'(0) from the one-sided three-point difference.
BCResidual bc_residual(const HybridState& s, const Params& prm, double lambda);

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, std::vector<double> samples)
      : std::runtime_error(what), samples_(std::move(samples)) {}
  const std::vector<double>& samples() const { return samples_; }

 private:
  std::vector<double> samples_;  // (s, residual) pairs
};

}  // namespace hnls
