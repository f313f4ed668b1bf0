#include "hnls/functionals.hpp"

#include <cmath>

namespace hnls {

namespace {

// |z|^e with fast paths for the common integer exponents; std::abs goes
// through hypot and dominates on long half-lines
inline double abs_pow(cplx z, double e) {
  const double n2 = std::norm(z);
  if (e == 2.0) return n2;
  if (e == 4.0) return n2 * n2;
  if (e == 1.0) return std::sqrt(n2);
  if (e == 3.0) return n2 * std::sqrt(n2);
  const double a = std::abs(z);
  return a == 0.0 ? 0.0 : std::pow(a, e);
}

}  // namespace

StateIntegrals integrals(const HybridState& s, double p, double r) {
  const auto d = Discretization::of(s);
  StateIntegrals I;
  const int N = s.hgrid.N, M = s.rgrid.M;
  const double h = s.hgrid.h();
  for (int i = 0; i + 1 < N; ++i) I.kin_u += std::norm(s.u[i + 1] - s.u[i]);
  I.kin_u /= h;
  for (int i = 0; i < N; ++i) {
    I.mass_u += d->w[i] * std::norm(s.u[i]);
    I.pow_u += d->w[i] * abs_pow(s.u[i], p);
  }
  I.u0 = s.u[0];
  for (int m = 0; m + 1 < M; ++m) {
    const RadialStencil st = radial_stencil(s.rgrid, m);
    cplx dp = 0.0;
    for (int k = 0; k < 4; ++k) dp += st.coef[k] * s.phi[st.idx[k]];
    I.kin_phi += d->kc[m] * std::norm(dp);
  }
  for (int j = 1; j < M; ++j) {
    I.mass_phi += d->W[j] * std::norm(s.phi[j]);
    I.green_phi += d->W[j] * d->G[j] * s.phi[j];
    I.pow_v += d->W[j] * abs_pow(s.phi[j] + s.q * d->G[j], r);
  }
  I.mass_v = I.mass_phi + 2.0 * std::real(std::conj(s.q) * I.green_phi) +
             std::norm(s.q) / (4.0 * kPi * s.lambda_ref);
  return I;
}

FunctionalValues assemble(const StateIntegrals& I, const HybridState& s, const Params& prm) {
  FunctionalValues f;
  const double lam = s.lambda_ref;
  f.mass = I.mass_u + I.mass_v;
  f.Q_alpha = I.kin_u + prm.alpha * std::norm(I.u0);
  f.Q_rho = I.kin_phi + lam * (I.mass_phi - I.mass_v) + charge_coefficient(prm.rho, lam) * std::norm(s.q);
  f.coupling_term = -prm.beta * std::real(s.q * std::conj(I.u0));
  f.E_halfline = 0.5 * f.Q_alpha - I.pow_u / prm.p;
  f.E_plane = 0.5 * f.Q_rho - I.pow_v / prm.r;
  f.E_total = f.E_halfline + f.E_plane + f.coupling_term;
  f.Q_total = f.Q_alpha + f.Q_rho + 2.0 * f.coupling_term;
  return f;
}

double mass(const HybridState& s) {
  const StateIntegrals I = integrals(s, 4.0, 3.0);
  return I.mass_u + I.mass_v;
}

double energy_halfline(const HybridState& s, double alpha, double p) {
  const StateIntegrals I = integrals(s, p, 3.0);
  return 0.5 * (I.kin_u + alpha * std::norm(I.u0)) - I.pow_u / p;
}

double energy_plane(const HybridState& s, double rho, double r) {
  const StateIntegrals I = integrals(s, 4.0, r);
  const double lam = s.lambda_ref;
  const double Q = I.kin_phi + lam * (I.mass_phi - I.mass_v) + charge_coefficient(rho, lam) * std::norm(s.q);
  return 0.5 * Q - I.pow_v / r;
}

FunctionalValues energy_total(const HybridState& s, const Params& prm) {
  return assemble(integrals(s, prm.p, prm.r), s, prm);
}

ActionValues action_suite(const HybridState& s, const Params& prm, double omega) {
  const StateIntegrals I = integrals(s, prm.p, prm.r);
  const FunctionalValues f = assemble(I, s, prm);
  const double p = prm.p, r = prm.r;
  ActionValues a;
  a.omega = omega;
  a.Q_omega = f.Q_total + omega * f.mass;
  a.S_omega = f.E_total + 0.5 * omega * f.mass;
  a.I_omega = a.Q_omega - I.pow_u - I.pow_v;
  a.S_tilde = (p - 2.0) / (2.0 * p) * I.pow_u + (r - 2.0) / (2.0 * r) * I.pow_v;
  a.A_omega = (r - 2.0) / (2.0 * r) * a.Q_omega + (p - r) / (p * r) * I.pow_u;
  return a;
}

HybridState gradient(const HybridState& s, const Params& prm) {
  const auto d = Discretization::of(s);
  const int N = s.hgrid.N, M = s.rgrid.M;
  const double h = s.hgrid.h();
  const double lam = s.lambda_ref;
  HybridState g = s;

  g.u.setZero();
  for (int i = 0; i + 1 < N; ++i) {
    const cplx du = (s.u[i + 1] - s.u[i]) / h;
    g.u[i] -= du;
    g.u[i + 1] += du;
  }
  g.u[0] += prm.alpha * s.u[0] - prm.beta * s.q;
  for (int i = 0; i < N; ++i) g.u[i] -= d->w[i] * abs_pow(s.u[i], prm.p - 2.0) * s.u[i];

  g.phi.setZero();
  cplx gq = 0.0;
  cplx green_phi = 0.0;
  for (int m = 0; m + 1 < M; ++m) {
    const RadialStencil st = radial_stencil(s.rgrid, m);
    cplx dp = 0.0;
    for (int k = 0; k < 4; ++k) dp += st.coef[k] * s.phi[st.idx[k]];
    dp *= d->kc[m];
    for (int k = 0; k < 4; ++k) g.phi[st.idx[k]] += st.coef[k] * dp;
  }
  for (int j = 1; j < M; ++j) {
    const cplx v = s.phi[j] + s.q * d->G[j];
    const cplx nl = d->W[j] * abs_pow(v, prm.r - 2.0) * v;
    g.phi[j] -= lam * d->W[j] * d->G[j] * s.q + nl;
    gq -= nl * d->G[j];
    green_phi += d->W[j] * d->G[j] * s.phi[j];
  }
  gq += -lam * green_phi - s.q / (4.0 * kPi) + charge_coefficient(prm.rho, lam) * s.q - prm.beta * s.u[0];
  g.q = gq;
  return g;
}

HybridState mass_gradient(const HybridState& s) {
  const auto d = Discretization::of(s);
  HybridState g = s;
  for (int i = 0; i < s.hgrid.N; ++i) g.u[i] = 2.0 * d->w[i] * s.u[i];
  g.phi.setZero();
  cplx green_phi = 0.0;
  for (int j = 1; j < s.rgrid.M; ++j) {
    g.phi[j] = 2.0 * d->W[j] * (s.phi[j] + s.q * d->G[j]);
    green_phi += d->W[j] * d->G[j] * s.phi[j];
  }
  g.q = 2.0 * green_phi + 2.0 * s.q / (4.0 * kPi * s.lambda_ref);
  return g;
}

double pairing(const HybridState& a, const HybridState& b) {
  double acc = 0.0;
  for (int i = 0; i < a.u.size(); ++i) acc += std::real(std::conj(a.u[i]) * b.u[i]);
  for (int j = 0; j < a.phi.size(); ++j) acc += std::real(std::conj(a.phi[j]) * b.phi[j]);
  acc += std::real(std::conj(a.q) * b.q);
  return acc;
}

GNReport gn_audit(const HybridState& s0, const Params& prm) {
  const StateIntegrals I0 = integrals(s0, prm.p, prm.r);
  if (I0.mass_u + I0.mass_v <= 0.0) throw DomainError("gn_audit: zero state has undefined quotients");
  const HybridState s = s0.q != cplx(0.0) ? change_of_decomposition(s0, std::norm(s0.q)) : s0;
  const StateIntegrals I = integrals(s, prm.p, prm.r);
  const double p = prm.p, r = prm.r;
  GNReport rep;
  auto row = [&](const char* name, double lhs, double rhs) {
    rep.rows.push_back({name, lhs, rhs, rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0)});
  };
  const double nu = std::sqrt(I.mass_u), ndu = std::sqrt(I.kin_u);
  row("gn1", I.pow_u, std::pow(nu, 0.5 * p + 1.0) * std::pow(ndu, 0.5 * p - 1.0));
  row("gn1_inf", s.u.cwiseAbs2().maxCoeff(), nu * ndu);

  const auto d = Discretization::of(s);
  double phi_pow = 0.0;
  for (int j = 1; j < s.rgrid.M; ++j) phi_pow += d->W[j] * std::pow(std::abs(s.phi[j]), r);
  const double ngrad = std::sqrt(I.kin_phi);
  const double gn2_rhs = std::pow(ngrad, r - 2.0) * I.mass_phi;
  row("gn2", phi_pow, gn2_rhs);
  if (s.q == cplx(0.0)) {
    row("gn2gen", phi_pow, gn2_rhs);
  } else {
    const double gp = std::pow(ngrad, r - 2.0);
    row("gn2gen", I.pow_v, gp * I.mass_v + gp + std::pow(std::abs(s.q), r - 2.0));
  }
  return rep;
}

}  // namespace hnls
