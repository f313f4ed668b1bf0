#pragma once

// Mass, energies, quadratic forms and action functionals of discretized
// hybrid states, together with the exact gradient of the discrete energy.

#include "hnls/core.hpp"

#include <string>
#include <vector>

namespace hnls {

/// Raw discrete integrals from which every functional is assembled.
struct StateIntegrals {
  double kin_u = 0;      // ||u'||^2
  double mass_u = 0;     // ||u||^2
  double pow_u = 0;      // ||u||_p^p
  cplx u0{0.0, 0.0};
  double kin_phi = 0;    // ||grad phi||^2
  double mass_phi = 0;   // ||phi||^2
  cplx green_phi{0.0, 0.0};  // <G_lambda, phi>
  double mass_v = 0;     // ||v||^2 = ||phi||^2 + 2 Re(conj(q) <G, phi>) + |q|^2/(4 pi lambda)
  double pow_v = 0;      // ||v||_r^r
};

StateIntegrals integrals(const HybridState& s, double p, double r);

struct FunctionalValues {
  double mass = 0;
  double E_halfline = 0;
  double E_plane = 0;
  double E_total = 0;
  double Q_alpha = 0;
  double Q_rho = 0;
  double Q_total = 0;
  double coupling_term = 0;  // -beta Re(q conj(u(0)))
};

struct ActionValues {
  double omega = 0;
  double S_omega = 0;
  double I_omega = 0;
  double S_tilde = 0;
  double A_omega = 0;
  double Q_omega = 0;
};

double mass(const HybridState& s);
double energy_halfline(const HybridState& s, double alpha, double p);
double energy_plane(const HybridState& s, double rho, double r);
FunctionalValues energy_total(const HybridState& s, const Params& prm);
FunctionalValues assemble(const StateIntegrals& I, const HybridState& s, const Params& prm);
ActionValues action_suite(const HybridState& s, const Params& prm, double omega);

/// Partial derivatives of E_total with respect to the real and imaginary parts
/// of every sample and of q, packed as complex numbers (d/dRe + i d/dIm).
/// Pairing with a direction is Re sum conj(g) d over all coordinates.
HybridState gradient(const HybridState& s, const Params& prm);
/// Same packing for the mass functional.
HybridState mass_gradient(const HybridState& s);
double pairing(const HybridState& a, const HybridState& b);

struct GNRow {
  std::string name;
  double lhs = 0;
  double rhs = 0;  // right side without its constant
  double quotient = 0;
};

struct GNReport {
  std::vector<GNRow> rows;  // gn1, gn1_inf, gn2, gn2gen
};

/// Gagliardo-Nirenberg quotients; the planar rows use lambda = |q|^2 when q != 0.
GNReport gn_audit(const HybridState& s, const Params& prm);

}  // namespace hnls
