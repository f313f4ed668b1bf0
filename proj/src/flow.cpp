#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hnls::detail {

namespace {

// Symmetric tridiagonal solve (diag a, off-diagonal b), factor once, reuse.
struct Tridiag {
  std::vector<double> c, inv_d;  // modified upper coefficients, reciprocal pivots

  void factor(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    c.assign(n, 0.0);
    inv_d.assign(n, 0.0);
    double d = a[0];
    inv_d[0] = 1.0 / d;
    for (std::size_t i = 1; i < n; ++i) {
      c[i - 1] = b[i - 1] * inv_d[i - 1];
      d = a[i] - b[i - 1] * c[i - 1];
      inv_d[i] = 1.0 / d;
    }
  }

  // solves in place on x[off .. off + n)
  void solve(VecC& x, int off, const std::vector<double>& b) const {
    const std::size_t n = inv_d.size();
    for (std::size_t i = 1; i < n; ++i) x[off + i] -= b[i - 1] * inv_d[i - 1] * x[off + i - 1];
    x[off + n - 1] *= inv_d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[off + i] = x[off + i] * inv_d[i] - c[i] * x[off + i + 1];
  }
};

struct Layout {
  int N, M;
  int size() const { return N + M + 1; }
  int phi0() const { return N; }
  int qi() const { return N + M; }
};

VecC pack(const HybridState& s) {
  const Layout L{s.hgrid.N, s.rgrid.M};
  VecC x(L.size());
  x.head(L.N) = s.u;
  x.segment(L.N, L.M) = s.phi;
  x[L.qi()] = s.q;
  return x;
}

void unpack(const VecC& x, HybridState& s) {
  const Layout L{s.hgrid.N, s.rgrid.M};
  s.u = x.head(L.N);
  s.phi = x.segment(L.N, L.M);
  s.q = x[L.qi()];
}

double dot(const VecC& a, const VecC& b) { return std::real(a.dot(b)); }  // Eigen conjugates a

// Block-diagonal (K + sigma D) preconditioner restricted to active coordinates.
class Preconditioner {
 public:
  Preconditioner(const HybridState& s, const FlowBlocks& blocks) : blocks_(blocks), lay_{s.hgrid.N, s.rgrid.M} {
    d_ = Discretization::of(s);
    hu_ = s.hgrid.h();
    lambda_ = s.lambda_ref;
  }

  void set_shift(double sigma, double q_scale_coeff) {
    sigma_ = sigma;
    const int N = lay_.N, M = lay_.M;
    // u block on nodes 0..N-2 (node N-1 is the Dirichlet wall)
    {
      std::vector<double> a(N - 1), b(N - 2);
      for (int i = 0; i < N - 1; ++i) a[i] = (i == 0 ? 1.0 : 2.0) / hu_ + sigma * d_->w[i];
      std::fill(b.begin(), b.end(), -1.0 / hu_);
      ub_ = b;
      tu_.factor(a, b);
    }
    {
      std::vector<double> a(M - 1, 0.0), b(M - 2);
      for (int j = 0; j < M - 1; ++j) {
        a[j] = d_->kr[j] + (j > 0 ? d_->kr[j - 1] : 0.0) + sigma * d_->W[j];
        if (j < M - 2) b[j] = -d_->kr[j];
      }
      pb_ = b;
      tp_.factor(a, b);
    }
    pq_ = q_scale_coeff;
  }

  // y = P^{-1} x on active coordinates, zero elsewhere
  VecC apply(const VecC& x, double q_abs) const {
    VecC y = VecC::Zero(x.size());
    if (blocks_.u) {
      y.head(lay_.N - 1) = x.head(lay_.N - 1);
      tu_.solve(y, 0, ub_);
    }
    if (blocks_.phi) {
      y.segment(lay_.N, lay_.M - 1) = x.segment(lay_.N, lay_.M - 1);
      tp_.solve(y, lay_.N, pb_);
    }
    if (blocks_.q) {
      const double damp = 1.0 / (1.0 + (q_abs > 0.0 ? std::abs(std::log(q_abs)) : 0.0));
      y[lay_.qi()] = x[lay_.qi()] * damp / pq_;
    }
    return y;
  }

 private:
  FlowBlocks blocks_;
  Layout lay_;
  std::shared_ptr<const Discretization> d_;
  double hu_ = 1.0, lambda_ = 1.0, sigma_ = 1.0, pq_ = 1.0;
  std::vector<double> ub_, pb_;
  Tridiag tu_, tp_;
};

void mask(VecC& x, const Layout& L, const FlowBlocks& b) {
  if (!b.u) x.head(L.N).setZero();
  x[L.N - 1] = 0.0;
  if (!b.phi) x.segment(L.N, L.M).setZero();
  x[L.N + L.M - 1] = 0.0;
  if (!b.q) x[L.qi()] = 0.0;
}

double q_coefficient(const Params& prm, double lambda, double sigma) {
  return std::abs(charge_coefficient(prm.rho, lambda)) + (1.0 + sigma) / (4.0 * kPi * lambda);
}

}  // namespace

HybridState project_mass(const HybridState& s, double mu) {
  const double m = mass(s);
  if (!(m > 0.0)) throw DomainError("cannot rescale a zero state to positive mass");
  HybridState t = s;
  const double f = std::sqrt(mu / m);
  t.u *= f;
  t.phi *= f;
  t.q *= f;
  return t;
}

double multiplier(const HybridState& s, const Params& prm) {
  const Layout L{s.hgrid.N, s.rgrid.M};
  const FlowBlocks all{};
  Preconditioner P(s, all);
  P.set_shift(1.0, q_coefficient(prm, s.lambda_ref, 1.0));
  VecC g = pack(gradient(s, prm)), m = pack(mass_gradient(s));
  mask(g, L, all);
  mask(m, L, all);
  const VecC Pm = P.apply(m, 1.0);
  return dot(g, Pm) / dot(m, Pm);
}

FlowResult run_flow(HybridState x, const Params& prm, const FlowBlocks& blocks, const FlowOptions& opt) {
  const Layout L{x.hgrid.N, x.rgrid.M};
  x.u[L.N - 1] = 0.0;
  x.phi[L.M - 1] = 0.0;
  if (!blocks.u) x.u.setZero();
  if (!blocks.phi) x.phi.setZero();
  if (!blocks.q) x.q = 0.0;
  const double mu = prm.mu;
  x = project_mass(x, mu);

  Preconditioner P(x, blocks), P1(x, blocks);
  P1.set_shift(1.0, q_coefficient(prm, x.lambda_ref, 1.0));
  double sigma = 1.0;
  P.set_shift(sigma, q_coefficient(prm, x.lambda_ref, sigma));

  auto eval = [&](const HybridState& s, VecC* g, VecC* mg) {
    const double e = energy_total(s, prm).E_total;
    if (g) {
      *g = pack(gradient(s, prm));
      mask(*g, L, blocks);
    }
    if (mg) {
      *mg = pack(mass_gradient(s));
      mask(*mg, L, blocks);
    }
    return e;
  };

  // projected residual r = g - kappa m, its preconditioned image d and the
  // stopping norm measured with the unit-shift preconditioner
  struct Projected {
    double kappa, mPm, norm;
    VecC r, d, Pm;
  };
  auto project = [&](const VecC& g, const VecC& mg, double qa) {
    Projected o;
    const VecC Pg = P.apply(g, qa);
    o.Pm = P.apply(mg, qa);
    o.mPm = dot(mg, o.Pm);
    o.kappa = dot(mg, Pg) / o.mPm;
    o.r = g - o.kappa * mg;
    o.d = Pg - o.kappa * o.Pm;
    o.norm = std::sqrt(std::max(0.0, dot(o.r, P1.apply(o.r, 1.0))));
    return o;
  };
  auto retract = [&](const VecC& v) {
    HybridState t = x;
    unpack(v, t);
    return mass(t) > 0.0 ? project_mass(t, mu) : t;
  };

  FlowResult out;
  VecC g, mg;
  double E = eval(x, &g, &mg);
  VecC dir_prev, d_prev, r_prev;
  double tau = 1.0;
  int since_reset = 0;
  Projected pr = project(g, mg, std::abs(x.q));

  for (int it = 0;; ++it) {
    out.gradient_norm = pr.norm;
    out.kappa = pr.kappa;
    out.iterations = it;
    if (pr.norm < opt.tolerance * (1.0 + std::abs(E))) {
      out.converged = true;
      break;
    }
    if (it >= opt.max_iterations) break;
    if (opt.monitor && it % opt.monitor_every == 0 && opt.monitor(x, E, it)) {
      out.stopped_by_monitor = true;
      break;
    }

    // refresh the shift from the multiplier estimate (omega ~ -2 kappa)
    if (it % 25 == 0) {
      const double s_new = std::clamp(-2.0 * pr.kappa, 0.05, 1e4);
      if (std::abs(s_new - sigma) > 0.2 * sigma) {
        sigma = s_new;
        P.set_shift(sigma, q_coefficient(prm, x.lambda_ref, sigma));
        pr = project(g, mg, std::abs(x.q));
        since_reset = 0;
        dir_prev.resize(0);
      }
    }

    VecC dir = -pr.d;
    if (opt.momentum && dir_prev.size() == dir.size() && since_reset < 200) {
      const double den = dot(r_prev, d_prev);
      const double bet = den > 0.0 ? std::max(0.0, dot(pr.r, pr.d - d_prev) / den) : 0.0;
      // keep the old direction tangent to the mass constraint
      dir += bet * (dir_prev - (dot(mg, dir_prev) / pr.mPm) * pr.Pm);
      if (dot(pr.r, dir) >= 0.0) {
        dir = -pr.d;
        since_reset = 0;
      }
    }
    const double slope = dot(pr.r, dir);
    if (!(slope < 0.0)) break;

    const VecC xv = pack(x);
    const double noise = 1e-13 * (1.0 + std::abs(E));
    struct Trial {
      double t = 0.0, E = 0.0;
      HybridState s;
      VecC g, mg;
      Projected pr;
    };
    auto try_step = [&](double t) {
      Trial o;
      o.t = t;
      o.s = retract(xv + t * dir);
      o.E = eval(o.s, &o.g, &o.mg);
      o.pr = project(o.g, o.mg, std::abs(o.s.q));
      return o;
    };
    // accept on sufficient decrease, or, once energy differences drown in
    // rounding, on a smaller residual with the energy flat to rounding
    auto acceptable = [&](const Trial& c) {
      if (c.t * -slope > noise) return c.E <= E + opt.armijo * c.t * slope;
      return c.E <= E + noise && c.pr.norm < pr.norm;
    };

    // secant on the directional derivative from a probe step
    Trial probe = try_step(tau);
    const double slope1 = dot(probe.pr.r, dir);
    double ts = slope1 > slope ? tau * slope / (slope - slope1) : 4.0 * tau;
    ts = std::clamp(ts, 0.02 * tau, 50.0 * tau);
    Trial best;
    bool accepted = false;
    if (std::abs(ts - tau) > 1e-3 * tau) {
      Trial sec = try_step(ts);
      if (acceptable(sec) && (!acceptable(probe) || sec.E <= probe.E + noise)) {
        best = std::move(sec);
        accepted = true;
      }
    }
    if (!accepted && acceptable(probe)) {
      best = std::move(probe);
      accepted = true;
    }
    for (double t = 0.5 * std::min(tau, ts); !accepted && t * -slope > 1e-3 * noise; t *= 0.5) {
      Trial c = try_step(t);
      if (acceptable(c)) {
        best = std::move(c);
        accepted = true;
      }
    }
    if (!accepted) {
      if (since_reset == 0) break;  // plain steepest step fails too
      dir_prev.resize(0);
      since_reset = 0;
      continue;
    }
    tau = best.t;
    const double E_new = best.E;
    HybridState trial = std::move(best.s);
    VecC g_new = std::move(best.g), mg_new = std::move(best.mg);
    Projected pr_new = std::move(best.pr);
    if (E_new > E + 1e-12 * (1.0 + std::abs(E))) out.monotone = false;
    x = trial;
    E = E_new;
    g = std::move(g_new);
    mg = std::move(mg_new);
    dir_prev = dir;
    d_prev = pr.d;
    r_prev = pr.r;
    pr = std::move(pr_new);
    ++since_reset;
  }
  out.state = x;
  out.energy = E;
  return out;
}

}  // namespace hnls::detail
