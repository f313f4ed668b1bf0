#include "hnls/core.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>
#include <sstream>

namespace hnls {

namespace {

std::string fmt_value(const char* name, double v) {
  std::ostringstream os;
  os.precision(17);
  os << name << " = " << v;
  return os.str();
}

// Ascending series, x <= 2. Returns (K0, K1).
std::pair<double, double> bessel_k_series(double x) {
  const double t = 0.25 * x * x;
  const double lg = std::log(0.5 * x);

  double i0 = 0.0, s0 = 0.0;
  double i1 = 0.0, s1 = 0.0;
  double term0 = 1.0;  // t^k / (k!)^2
  double term1 = 1.0;  // t^k / (k! (k+1)!)
  double hk = 0.0;     // harmonic number H_k
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term0 *= t / (double(k) * k);
      term1 *= t / (double(k) * (k + 1));
      hk += 1.0 / k;
    }
    i0 += term0;
    s0 += hk * term0;
    i1 += term1;
    // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
    s1 += (-2.0 * kEulerGamma + 2.0 * hk + 1.0 / (k + 1)) * term1;
    if (term0 < 1e-18 * i0 && k > 2) break;
  }
  const double k0 = -(lg + kEulerGamma) * i0 + s0;
  const double k1 = 1.0 / x + lg * (0.5 * x * i1) - 0.25 * x * s1;
  return {k0, k1};
}

// Steed's continued fraction (Temme's CF2 form), x > 2.
std::pair<double, double> bessel_k_cf(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= 10000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h = a1 * h;
  const double k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  const double k1 = k0 * (0.5 + x - h) / x;
  return {k0, k1};
}

std::pair<double, double> bessel_k01(double x) {
  if (!(x > 0.0)) throw DomainError(fmt_value("bessel_k: x must be positive, x", x));
  if (x > 740.0) return {0.0, 0.0};
  return x <= 2.0 ? bessel_k_series(x) : bessel_k_cf(x);
}

}  // namespace

void validate(const Params& prm) {
  std::string msg;
  auto bad = [&](const std::string& m) { msg += (msg.empty() ? "" : "; ") + m; };
  if (!std::isfinite(prm.alpha)) bad("alpha must be finite");
  if (!std::isfinite(prm.rho)) bad("rho must be finite");
  if (!(prm.beta >= 0.0) || !std::isfinite(prm.beta)) bad(fmt_value("beta must be >= 0, beta", prm.beta));
  if (!(prm.p > 2.0 && prm.p < 6.0)) bad(fmt_value("p must lie in (2, 6) (subcritical), p", prm.p));
  if (!(prm.r > 2.0 && prm.r < 4.0)) bad(fmt_value("r must lie in (2, 4) (subcritical), r", prm.r));
  if (!(prm.mu > 0.0) || !std::isfinite(prm.mu)) bad(fmt_value("mu must be > 0, mu", prm.mu));
  if (!msg.empty()) throw DomainError(msg);
}

Params make_params(double alpha, double rho, double beta, double p, double r, double mu) {
  Params prm{alpha, rho, beta, p, r, mu};
  validate(prm);
  return prm;
}

VecR HalfLineGrid::nodes() const {
  VecR x(N);
  for (int i = 0; i < N; ++i) x[i] = this->x(i);
  return x;
}

double RadialGrid::r(int j) const {
  if (j == M - 1) return R;
  return R * std::pow(double(j) / (M - 1), g);
}

VecR RadialGrid::nodes() const {
  VecR x(M);
  for (int j = 0; j < M; ++j) x[j] = r(j);
  return x;
}

void validate(const HalfLineGrid& grid) {
  if (!(grid.L > 0.0)) throw DomainError(fmt_value("half-line length must be positive, L", grid.L));
  if (grid.N < 3) throw DomainError("half-line grid needs at least 3 nodes");
}

void validate(const RadialGrid& grid) {
  if (!(grid.R > 0.0)) throw DomainError(fmt_value("radius must be positive, R", grid.R));
  if (grid.M < 3) throw DomainError("radial grid needs at least 3 nodes");
  if (!(grid.g >= 1.0)) throw DomainError(fmt_value("grading exponent must be >= 1, g", grid.g));
}

HybridState HybridState::zeros(const HalfLineGrid& hg, const RadialGrid& rg, double lambda) {
  HybridState s;
  s.hgrid = hg;
  s.rgrid = rg;
  s.u = VecC::Zero(hg.N);
  s.phi = VecC::Zero(rg.M);
  s.lambda_ref = lambda;
  return s;
}

double bessel_k0(double x) { return bessel_k01(x).first; }
double bessel_k1(double x) { return bessel_k01(x).second; }

double green2d(double lambda, double radius) {
  if (!(lambda > 0.0)) throw DomainError(fmt_value("green2d: lambda must be positive, lambda", lambda));
  if (!(radius > 0.0)) throw DomainError(fmt_value("green2d: radius must be positive, radius", radius));
  return bessel_k0(std::sqrt(lambda) * radius) / (2.0 * kPi);
}

double green_l2_norm(double lambda) {
  if (!(lambda > 0.0)) throw DomainError(fmt_value("green_l2_norm: lambda must be positive, lambda", lambda));
  return 1.0 / (2.0 * std::sqrt(kPi * lambda));
}

double charge_coefficient(double rho, double lambda) {
  return rho + (kEulerGamma - kLog2 + 0.5 * std::log(lambda)) / (2.0 * kPi);
}

double green_difference_at_origin(double lambda, double nu) {
  return std::log(nu / lambda) / (4.0 * kPi);
}

VecR halfline_weights(const HalfLineGrid& grid) {
  VecR w = VecR::Constant(grid.N, grid.h());
  w[0] *= 0.5;
  w[grid.N - 1] *= 0.5;
  return w;
}

VecR radial_weights(const RadialGrid& grid) {
  // Trapezoid in t = (r/R)^{1/g} on the Jacobian 2 pi g R^2 t^{2g-1}, with
  // Gregory end corrections so cubics in t are integrated exactly.
  const int M = grid.M;
  const double dt = 1.0 / (M - 1), g = grid.g;
  VecR w(M);
  for (int j = 0; j < M; ++j) {
    const double t = j * dt;
    w[j] = 2.0 * kPi * g * grid.R * grid.R * std::pow(t, 2.0 * g - 1.0) * dt;
  }
  if (M >= 7) {
    static constexpr double corr[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int k = 0; k < 3; ++k) {
      w[k] *= corr[k];
      w[M - 1 - k] *= corr[k];
    }
  } else {
    w[0] *= 0.5;
    w[M - 1] *= 0.5;
  }
  w[0] = 0.0;
  return w;
}

RadialStencil radial_stencil(const RadialGrid& grid, int m) {
  // d/dt at t_{m+1/2} to fourth order: (f_{m-1} - 27 f_m + 27 f_{m+1} - f_{m+2}) / (24 dt).
  // Even reflection at the origin, odd reflection through the wall node.
  const int M = grid.M;
  RadialStencil st{{m - 1, m, m + 1, m + 2}, {1.0, -27.0, 27.0, -1.0}};
  if (st.idx[0] < 0) st.idx[0] = 1;
  if (st.idx[3] > M - 1) {
    st.idx[3] = 2 * (M - 1) - st.idx[3];
    st.coef[3] = -st.coef[3];
  }
  return st;
}

double quad_halfline(const Eigen::Ref<const VecR>& f, const HalfLineGrid& grid) {
  if (f.size() != grid.N) throw std::invalid_argument("quad_halfline: sample count does not match grid");
  return halfline_weights(grid).dot(f);
}

double quad_radial(const Eigen::Ref<const VecR>& f, const RadialGrid& grid) {
  if (f.size() != grid.M) throw std::invalid_argument("quad_radial: sample count does not match grid");
  const VecR w = radial_weights(grid);
  double acc = 0.0;
  for (int j = 1; j < grid.M; ++j) acc += w[j] * f[j];
  return acc;
}

VecR sample_green(const RadialGrid& grid, double lambda) {
  VecR G(grid.M);
  G[0] = std::numeric_limits<double>::quiet_NaN();
  const double s = std::sqrt(lambda);
  for (int j = 1; j < grid.M; ++j) G[j] = bessel_k0(s * grid.r(j)) / (2.0 * kPi);
  return G;
}

std::shared_ptr<const Discretization> Discretization::get(const HalfLineGrid& hg, const RadialGrid& rg,
                                                          double lambda) {
  using Key = std::tuple<double, int, double, int, double, double>;
  static std::mutex mtx;
  static std::map<Key, std::shared_ptr<const Discretization>> cache;
  const Key key{hg.L, hg.N, rg.R, rg.M, rg.g, lambda};
  {
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  validate(hg);
  validate(rg);
  if (!(lambda > 0.0)) throw DomainError("decomposition parameter lambda must be positive");
  auto d = std::make_shared<Discretization>();
  d->hgrid = hg;
  d->rgrid = rg;
  d->lambda = lambda;
  d->w = halfline_weights(hg);
  d->W = radial_weights(rg);
  d->G = sample_green(rg, lambda);
  d->G[0] = 0.0;
  const VecR r = rg.nodes();
  d->kr.resize(rg.M - 1);
  d->kc.resize(rg.M - 1);
  const double dt = 1.0 / (rg.M - 1);
  for (int j = 0; j + 1 < rg.M; ++j) {
    d->kr[j] = kPi * (r[j] + r[j + 1]) / (r[j + 1] - r[j]);
    // int |phi_r|^2 2 pi r dr = (2 pi / g) int t |phi_t|^2 dt, midpoint rule
    d->kc[j] = 2.0 * kPi / rg.g * ((j + 0.5) * dt) / (576.0 * dt);
  }
  std::lock_guard<std::mutex> lk(mtx);
  // bounded by entry count and by stored doubles (fine half-line grids are large)
  static std::size_t stored = 0;
  const std::size_t size = d->w.size() + d->W.size() + d->G.size() + d->kr.size() + d->kc.size();
  if (cache.size() >= 64 || stored + size > (std::size_t(1) << 25)) {
    cache.clear();
    stored = 0;
  }
  cache.emplace(key, d);
  stored += size;
  return d;
}

HybridState change_of_decomposition(const HybridState& s, double new_lambda) {
  if (!(new_lambda > 0.0))
    throw DomainError(fmt_value("change_of_decomposition: lambda must be positive, lambda", new_lambda));
  HybridState out = s;
  out.lambda_ref = new_lambda;
  if (s.q == cplx(0.0) || new_lambda == s.lambda_ref) return out;
  const auto da = Discretization::get(s.hgrid, s.rgrid, s.lambda_ref);
  const auto db = Discretization::get(s.hgrid, s.rgrid, new_lambda);
  const VecR& Ga = da->G;
  const VecR& Gb = db->G;
  out.phi[0] += s.q * green_difference_at_origin(s.lambda_ref, new_lambda);
  for (int j = 1; j < s.rgrid.M; ++j) out.phi[j] += s.q * (Ga[j] - Gb[j]);
  return out;
}

VecC planar_field(const HybridState& s) {
  VecC v = s.phi;
  if (s.q == cplx(0.0)) return v;
  const auto d = Discretization::of(s);
  const VecR& G = d->G;
  v[0] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  for (int j = 1; j < s.rgrid.M; ++j) v[j] += s.q * G[j];
  return v;
}

cplx planar_field_at(const HybridState& s, double radius) {
  if (!(radius > 0.0)) throw DomainError("planar_field_at: radius must be positive");
  const RadialGrid& g = s.rgrid;
  cplx phi_val(0.0);
  if (radius < g.R) {
    // invert r = R t^g, then bracket
    const double t = std::pow(radius / g.R, 1.0 / g.g) * (g.M - 1);
    int j = std::min(int(std::floor(t)), g.M - 2);
    while (j > 0 && g.r(j) > radius) --j;
    while (j + 1 < g.M - 1 && g.r(j + 1) < radius) ++j;
    const double r0 = g.r(j), r1 = g.r(j + 1);
    const double w = (radius - r0) / (r1 - r0);
    phi_val = (1.0 - w) * s.phi[j] + w * s.phi[j + 1];
  }
  return phi_val + s.q * green2d(s.lambda_ref, radius);
}

}  // namespace hnls
