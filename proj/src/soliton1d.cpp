#include "hnls/soliton1d.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hnls {

namespace {

void check_p(double p) {
  if (!(p > 2.0 && p < 6.0)) {
    std::ostringstream os;
    os << "p must lie in (2, 6), p = " << p;
    throw DomainError(os.str());
  }
}

// log sech(y), stable for large |y|
double log_sech(double y) {
  const double a = std::abs(y);
  return kLog2 - a - std::log1p(std::exp(-2.0 * a));
}

double integral_from_nonneg(double z0, double e) {
  thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  auto f = [e](double z, double zc) {
    // zc is the signed distance to the nearer endpoint; use it near z = 1
    const double one_minus = (zc > 0.0) ? zc : 1.0 - z;
    return std::pow(one_minus * (1.0 + z), e);
  };
  if (z0 >= 1.0) return 0.0;
  return ts.integrate(f, z0, 1.0, 1e-15);
}

}  // namespace

double sech_tail_integral(double z0, double e) {
  if (!(z0 > -1.0 && z0 < 1.0)) throw DomainError("sech_tail_integral: z0 must lie in (-1, 1)");
  if (z0 >= 0.0) return integral_from_nonneg(z0, e);
  return 2.0 * integral_from_nonneg(0.0, e) - integral_from_nonneg(-z0, e);
}

double Soliton1D::operator()(double x) const {
  const double b = 2.0 / (p - 2.0);
  return amplitude * std::exp(b * log_sech(width * x));
}

Soliton1D make_soliton(double p, double omega) {
  check_p(p);
  if (!(omega > 0.0)) throw DomainError("soliton frequency must be positive");
  Soliton1D s;
  s.p = p;
  s.omega = omega;
  const double b = 2.0 / (p - 2.0);
  s.amplitude = std::pow(p * omega / 2.0, 1.0 / (p - 2.0));
  s.width = (p - 2.0) * std::sqrt(omega) / 2.0;
  const double A2 = s.amplitude * s.amplitude, k = s.width;
  const double j0 = 2.0 * sech_tail_integral(0.0, b - 1.0);
  const double j1 = 2.0 * sech_tail_integral(0.0, b);
  s.mass = A2 / k * j0;
  const double kin = A2 * k * b * b * (j0 - j1);
  const double pw = std::pow(s.amplitude, p) / k * j1;
  s.energy = 0.5 * kin - pw / p;
  return s;
}

double soliton_profile(double p, double omega, double x) {
  check_p(p);
  if (!(omega > 0.0)) throw DomainError("soliton frequency must be positive");
  const double b = 2.0 / (p - 2.0);
  const double A = std::pow(p * omega / 2.0, 1.0 / (p - 2.0));
  const double k = (p - 2.0) * std::sqrt(omega) / 2.0;
  return A * std::exp(b * log_sech(k * x));
}

double soliton_omega_for_mass(double p, double mu) {
  const Soliton1D s1 = make_soliton(p, 1.0);
  const double sigma = (6.0 - p) / (2.0 * (p - 2.0));
  return std::pow(mu / s1.mass, 1.0 / sigma);
}

double theta_p(double p) {
  const Soliton1D s = make_soliton(p, 1.0);
  return -s.energy * std::pow(s.mass, -(p + 2.0) / (6.0 - p));
}

double soliton_energy_line(double p, double mu) {
  check_p(p);
  if (mu < 0.0) throw DomainError("mass must be nonnegative");
  if (mu == 0.0) return 0.0;
  return -theta_p(p) * std::pow(mu, (p + 2.0) / (6.0 - p));
}

double mu_p_of_alpha(double p, double alpha) {
  check_p(p);
  if (!(alpha > 0.0)) throw DomainError("mu_p_of_alpha: alpha must be positive");
  return make_soliton(p, alpha * alpha).mass;
}

double c_p(double p) {
  check_p(p);
  const double integral = sech_tail_integral(0.0, (4.0 - p) / (p - 2.0));
  return std::pow(2.0 / p, 2.0 / (6.0 - p)) *
         std::pow((p - 2.0) / (4.0 * integral), (p - 2.0) / (6.0 - p));
}

RobinTail robin_tail(double p, double alpha, double omega) {
  check_p(p);
  if (!(omega > alpha * alpha)) throw DomainError("robin_tail: need omega > alpha^2");
  const double b = 2.0 / (p - 2.0);
  const double A2 = std::pow(p * omega / 2.0, b);
  const double k = std::sqrt(omega) / b;
  RobinTail t;
  t.omega = omega;
  t.z0 = -alpha / std::sqrt(omega);
  const double ja = sech_tail_integral(t.z0, b - 1.0);
  const double jb = sech_tail_integral(t.z0, b);
  t.mass = A2 / k * ja;
  const double kin = A2 * k * b * b * (ja - jb);
  const double pw = std::pow(A2, p / 2.0) / k * jb;
  const double u0sq = A2 * std::pow(1.0 - t.z0 * t.z0, b);
  t.energy = 0.5 * kin + 0.5 * alpha * u0sq - pw / p;
  return t;
}

double HalflineGroundState::operator()(double x) const {
  const double b = 2.0 / (p - 2.0);
  const double A = std::pow(p * omega / 2.0, 1.0 / (p - 2.0));
  const double k = (p - 2.0) * std::sqrt(omega) / 2.0;
  return A * std::exp(b * log_sech(k * (x + shift)));
}

VecR HalflineGroundState::sample(const HalfLineGrid& grid) const {
  VecR u(grid.N);
  for (int i = 0; i < grid.N; ++i) u[i] = (*this)(grid.x(i));
  return u;
}

HalflineGroundState halfline_ground_state(double p, double alpha, double mu) {
  check_p(p);
  if (!(mu > 0.0)) throw DomainError("halfline_ground_state: mass must be positive");
  HalflineGroundState out;
  out.p = p;
  out.alpha = alpha;
  out.mu = mu;
  out.level = soliton_energy_line(p, mu);
  const double k_of = (p - 2.0) / 2.0;

  std::vector<RobinTail> cands;
  if (alpha == 0.0) {
    const double omega = soliton_omega_for_mass(p, 2.0 * mu);
    cands.push_back(robin_tail(p, 0.0, omega));
  } else {
    // omega = alpha^2 t^2 with t > 1
    const double a2 = alpha * alpha;
    auto f = [&](double t) { return robin_tail(p, alpha, a2 * t * t).mass - mu; };
    std::vector<double> ts;
    for (int e = -12; e < 0; ++e)
      for (double m : {1.0, 2.0, 5.0}) ts.push_back(1.0 + m * std::pow(10.0, e));
    for (double t = 2.0; t < 1e7; t *= 1.25) ts.push_back(t);
    std::vector<double> trace;
    double tp = ts[0], fp = f(tp);
    int positive_run = 0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
      const double t = ts[i], ft = f(t);
      trace.push_back(t);
      trace.push_back(ft);
      if ((fp < 0.0) != (ft < 0.0)) {
        boost::uintmax_t iters = 200;
        auto tol = boost::math::tools::eps_tolerance<double>(50);
        const auto br = boost::math::tools::toms748_solve(f, tp, t, fp, ft, tol, iters);
        if (iters >= 200) throw RootFindError("halfline_ground_state: mass equation did not converge", trace);
        cands.push_back(robin_tail(p, alpha, a2 * std::pow(0.5 * (br.first + br.second), 2)));
      }
      positive_run = ft > 0.0 ? positive_run + 1 : 0;
      if (t > 10.0 && positive_run >= 3) break;
      tp = t;
      fp = ft;
    }
  }
  out.candidates = int(cands.size());
  if (cands.empty()) return out;
  const auto best = std::min_element(cands.begin(), cands.end(),
                                     [](const RobinTail& a, const RobinTail& b) { return a.energy < b.energy; });
  out.omega = best->omega;
  out.shift = std::atanh(best->z0) / (k_of * std::sqrt(best->omega));
  out.energy = best->energy;
  const double tol = 1e-10 * std::abs(out.level);
  out.exists = out.energy <= out.level + tol;
  out.boundary = p > 4.0 && std::abs(out.energy - out.level) <= tol;
  return out;
}

AlphaThreshold alpha_threshold(double p, double mu) {
  check_p(p);
  if (!(mu > 0.0)) throw DomainError("alpha_threshold: mass must be positive");
  const double bound = c_p(p) * std::pow(mu, (p - 2.0) / (6.0 - p));
  if (p <= 4.0) return {bound, true};
  const double level = soliton_energy_line(p, mu);
  // sign of (least tail energy - level), +1 when no tail exists
  auto side = [&](double a) {
    const HalflineGroundState gs = halfline_ground_state(p, a, mu);
    if (gs.candidates == 0) return 1.0;
    return gs.energy - level;
  };
  double lo = bound, hi = bound * 1.05;
  if (side(lo) >= 0.0) throw RootFindError("alpha_threshold: lower bound does not reach the soliton level", {lo});
  std::vector<double> trace{lo};
  while (side(hi) < 0.0) {
    lo = hi;
    hi *= 1.2;
    trace.push_back(hi);
    if (trace.size() > 200) throw RootFindError("alpha_threshold: no upper bracket", trace);
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (side(mid) < 0.0 ? lo : hi) = mid;
  }
  const double value = 0.5 * (lo + hi);
  if (!(value > bound)) throw RootFindError("alpha_threshold: numeric threshold not above the lower bound", trace);
  return {value, false};
}

}  // namespace hnls
