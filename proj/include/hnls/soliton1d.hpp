#pragma once

// One-dimensional NLS solitons w = A sech^{2/(p-2)}(k x), their mass and
// energy, and the Robin-tail ground states of the half-line.

#include "hnls/core.hpp"

#include <string>
#include <vector>

namespace hnls {

struct Soliton1D {
  double p = 4.0;
  double omega = 1.0;
  double amplitude = 0.0;  // (p omega / 2)^{1/(p-2)}
  double width = 0.0;      // k = (p-2) sqrt(omega) / 2
  double mass = 0.0;
  double energy = 0.0;

  double operator()(double x) const;
};

Soliton1D make_soliton(double p, double omega);
double soliton_profile(double p, double omega, double x);

/// Frequency of the whole-line soliton with mass mu.
double soliton_omega_for_mass(double p, double mu);

/// theta_p = -E_NLS of the unit-mass soliton.
double theta_p(double p);
/// -theta_p mu^{(p+2)/(6-p)}.
double soliton_energy_line(double p, double mu);
/// Mass of the soliton with omega = alpha^2.
double mu_p_of_alpha(double p, double alpha);
double c_p(double p);

/// int_{z0}^{1} (1 - z^2)^e dz by tanh-sinh quadrature, z0 in (-1, 1).
double sech_tail_integral(double z0, double e);

struct AlphaThreshold {
  double value = 0.0;
  bool exact = true;
};
AlphaThreshold alpha_threshold(double p, double mu);

/// Candidate or winner of the half-line problem: u(x) = w(x + shift).
struct HalflineGroundState {
  bool exists = false;
  bool boundary = false;  // energy equals the soliton level (4 < p < 6 only)
  double p = 4.0;
  double alpha = 0.0;
  double mu = 0.0;
  double omega = 0.0;
  double shift = 0.0;
  double energy = 0.0;
  double level = 0.0;  // soliton_energy_line(p, mu)
  int candidates = 0;

  double operator()(double x) const;
  VecR sample(const HalfLineGrid& grid) const;
};

/// Energy and mass of the translate with Robin condition w'(s) = alpha w(s).
struct RobinTail {
  double omega = 0.0;
  double z0 = 0.0;  // tanh(k s)
  double mass = 0.0;
  double energy = 0.0;
};
RobinTail robin_tail(double p, double alpha, double omega);

HalflineGroundState halfline_ground_state(double p, double alpha, double mu);

class RootFindError : public std::runtime_error {
 public:
  RootFindError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace hnls
