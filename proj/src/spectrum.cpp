#include "hnls/spectrum.hpp"

#include "hnls/functionals.hpp"
#include "hnls/plane2d.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace hnls {

namespace {

// residual as a function of s = sqrt(-nu)
double secular(double s, const Params& prm) {
  return (prm.alpha + s) * charge_coefficient(prm.rho, s * s) - prm.beta * prm.beta;
}

double solve_in(double a, double b, const Params& prm) {
  auto f = [&](double s) { return secular(s, prm); };
  const double fa = f(a), fb = f(b);
  if ((fa < 0.0) == (fb < 0.0)) throw BracketError("secular equation: no sign change", {a, fa, b, fb});
  boost::uintmax_t iters = 300;
  // 40 bits ~ 1e-12 relative
  const auto br = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(40), iters);
  return 0.5 * (br.first + br.second);
}

// largest root: s above max(-alpha, sqrt(omega_rho)), residual increasing from -beta^2
double upper_root(const Params& prm) {
  const double lo = std::max({-prm.alpha, std::sqrt(omega_rho(prm.rho)), 0.0});
  double hi = std::max(2.0 * lo, 1.0);
  std::vector<double> samples;
  while (secular(hi, prm) <= 0.0) {
    samples.push_back(hi);
    samples.push_back(secular(hi, prm));
    hi *= 2.0;
    if (hi > 1e150) throw BracketError("secular equation: upper bracket not found", samples);
  }
  // lo itself may sit exactly on a factor zero; nudge inside
  return solve_in(lo > 0.0 ? lo : 1e-300, hi, prm);
}

// secular residual in t = log s, finite for any t
double secular_log(double t, const Params& prm) {
  return (prm.alpha + std::exp(t)) * (prm.rho + (kEulerGamma - std::log(2.0) + t) / (2.0 * kPi)) - prm.beta * prm.beta;
}

// log of the root below min(-alpha, sqrt(omega_rho)) when alpha < 0
double lower_root_log(const Params& prm) {
  const double hi = std::log(std::min(-prm.alpha, std::sqrt(omega_rho(prm.rho))));
  auto f = [&](double t) { return secular_log(t, prm); };
  double step = 1.0, lo = hi - step;
  std::vector<double> samples;
  while (f(lo) <= 0.0) {
    samples.push_back(lo);
    samples.push_back(f(lo));
    step *= 2.0;
    lo = hi - step;
    if (step > 1e300) throw BracketError("secular equation: lower bracket not found", samples);
  }
  const double fa = f(lo), fb = f(hi);
  boost::uintmax_t iters = 300;
  const auto br = boost::math::tools::toms748_solve(f, lo, hi, fa, fb, boost::math::tools::eps_tolerance<double>(48), iters);
  return 0.5 * (br.first + br.second);
}

}  // namespace

double least_eig_1d(double alpha) { return alpha < 0.0 ? -alpha * alpha : 0.0; }

double eigen_residual(double nu, const Params& prm) {
  if (!(nu < 0.0)) throw DomainError("eigen_residual: nu must be negative");
  return secular(std::sqrt(-nu), prm);
}

SpectrumResult discrete_spectrum(const Params& prm) {
  SpectrumResult out;
  out.omega_rho = omega_rho(prm.rho);
  out.ell_alpha = prm.alpha < 0.0 ? prm.alpha * prm.alpha : 0.0;
  std::vector<double> logs;  // log sqrt(-ell) per eigenvalue
  if (prm.beta == 0.0) {
    logs.push_back(0.5 * std::log(out.omega_rho));
    if (prm.alpha < 0.0) logs.push_back(std::log(-prm.alpha));
    out.case_label = prm.alpha < 0.0 ? "decoupled, alpha < 0" : "decoupled, alpha >= 0";
  } else {
    logs.push_back(std::log(upper_root(prm)));
    if (prm.alpha < 0.0) logs.push_back(lower_root_log(prm));
    out.case_label = prm.alpha < 0.0 ? "coupled, alpha < 0" : "coupled, alpha >= 0";
  }
  // most negative first
  std::sort(logs.begin(), logs.end(), std::greater<>());
  out.log_decay = logs;
  for (double t : logs) {
    double ell = -std::exp(2.0 * t);
    if (ell == 0.0) ell = -std::numeric_limits<double>::denorm_min();
    out.eigenvalues.push_back(ell);
  }
  // exact decoupled values, not round trips through log
  if (prm.beta == 0.0)
    for (double& ell : out.eigenvalues) {
      if (std::abs(ell + out.omega_rho) <= 1e-12 * out.omega_rho) ell = -out.omega_rho;
      else if (prm.alpha < 0.0 && std::abs(ell + prm.alpha * prm.alpha) <= 1e-12 * prm.alpha * prm.alpha)
        ell = -prm.alpha * prm.alpha;
    }
  out.e_lin = -out.eigenvalues.front();
  return out;
}

double e_lin(const Params& prm) { return discrete_spectrum(prm).e_lin; }

HybridState eigenfunction(const Params& prm, double ell, const HalfLineGrid& hg, const RadialGrid& rg) {
  if (!(ell < 0.0)) throw DomainError("eigenfunction: eigenvalue must be negative");
  validate(hg);
  validate(rg);
  const double s = std::sqrt(-ell);
  HybridState st = HybridState::zeros(hg, rg, s * s);
  double a = 0.0, c = 0.0;
  if (prm.beta > 0.0) {
    const double res = secular(s, prm);
    const double scale = std::abs(prm.alpha + s) * std::abs(charge_coefficient(prm.rho, s * s)) + prm.beta * prm.beta;
    if (std::abs(res) > 1e-8 * scale) throw DomainError("eigenfunction: ell is not an eigenvalue");
    // u'(0) = alpha u(0) - beta q fixes the charge
    a = 1.0;
    c = (prm.alpha + s) / prm.beta;
  } else {
    const double wr = omega_rho(prm.rho);
    if (std::abs(s * s - wr) <= 1e-10 * wr) {
      c = 1.0;
    } else if (prm.alpha < 0.0 && std::abs(s + prm.alpha) <= 1e-10 * s) {
      a = 1.0;
    } else {
      throw DomainError("eigenfunction: ell is not an eigenvalue");
    }
  }
  for (int i = 0; i < hg.N; ++i) st.u[i] = a * std::exp(-s * hg.x(i));
  st.u[hg.N - 1] = 0.0;
  st.q = c;
  const double m = mass(st);
  const double f = 1.0 / std::sqrt(m);
  st.u *= f;
  st.q *= f;
  return st;
}

BCResidual bc_residual(const HybridState& s0, const Params& prm, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("bc_residual: lambda must be positive");
  HybridState moved;
  if (s0.lambda_ref != lambda) moved = change_of_decomposition(s0, lambda);
  const HybridState& s = s0.lambda_ref == lambda ? s0 : moved;
  const double h = s.hgrid.h();
  const cplx du0 = (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) / (2.0 * h);
  BCResidual r;
  r.res1 = std::abs(du0 - prm.alpha * s.u[0] + prm.beta * s.q);
  r.res2 = std::abs(s.phi[0] + prm.beta * s.u[0] - charge_coefficient(prm.rho, lambda) * s.q);
  return r;
}

}  // namespace hnls
