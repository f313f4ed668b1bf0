#include "hnls/minimizer.hpp"

#include "flow.hpp"
#include "hnls/plane2d.hpp"
#include "hnls/soliton1d.hpp"
#include "hnls/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hnls {

namespace {

double escape_fraction_of(const HybridState& s, double threshold) {
  const auto d = Discretization::of(s);
  double beyond = 0.0;
  for (int i = 0; i < s.hgrid.N; ++i)
    if (s.hgrid.x(i) > threshold) beyond += d->w[i] * std::norm(s.u[i]);
  return beyond / mass(s);
}

HybridState halfline_seed(const Params& prm, const Grids& g, double lambda) {
  HybridState s = HybridState::zeros(g.half, g.radial, lambda);
  bool placed = false;
  try {
    const HalflineGroundState hs = halfline_ground_state(prm.p, prm.alpha, prm.mu);
    if (hs.candidates > 0) {
      for (int i = 0; i < g.half.N; ++i) s.u[i] = hs(g.half.x(i));
      placed = true;
    }
  } catch (const RootFindError&) {
  }
  if (!placed) {
    // no Robin tail: the whole soliton parked mid-way along the half-line
    const double omega = soliton_omega_for_mass(prm.p, prm.mu);
    const double x0 = 0.5 * g.half.L;
    for (int i = 0; i < g.half.N; ++i) s.u[i] = soliton_profile(prm.p, omega, g.half.x(i) - x0);
  }
  return s;
}

}  // namespace

void validate(const SolverOptions& o) {
  std::ostringstream err;
  if (o.max_iterations < 1) err << "max_iterations must be >= 1; ";
  if (!(o.tolerance > 0.0)) err << "tolerance must be positive; ";
  if (!(o.armijo > 0.0 && o.armijo < 0.5)) err << "armijo must lie in (0, 0.5); ";
  if (!(o.escape_fraction > 0.0 && o.escape_fraction < 1.0)) err << "escape_fraction must lie in (0, 1); ";
  if (!(o.escape_mass_fraction > 0.0 && o.escape_mass_fraction <= 1.0)) err << "escape_mass_fraction must lie in (0, 1]; ";
  if (!(o.escape_energy_tolerance > 0.0)) err << "escape_energy_tolerance must be positive; ";
  if (o.monitor_every < 1) err << "monitor_every must be >= 1; ";
  if (!err.str().empty()) throw DomainError(err.str());
}

std::string to_string(MinimizerStatus s) {
  switch (s) {
    case MinimizerStatus::Converged: return "Converged";
    case MinimizerStatus::EscapedHalfline: return "EscapedHalfline";
    case MinimizerStatus::MaxIterations: return "MaxIterations";
  }
  return "?";
}

double omega_star(const HybridState& s, const Params& prm) {
  const StateIntegrals I = integrals(s, prm.p, prm.r);
  const FunctionalValues f = assemble(I, s, prm);
  if (!(f.mass > 0.0)) throw DomainError("omega_star: zero state");
  return (I.pow_u + I.pow_v - f.Q_total) / f.mass;
}

double halfline_el_residual(const HybridState& s, const Params& prm, double omega) {
  const double h = s.hgrid.h();
  double acc = 0.0;
  for (int i = 1; i + 1 < s.hgrid.N; ++i) {
    const cplx lap = (s.u[i + 1] - 2.0 * s.u[i] + s.u[i - 1]) / (h * h);
    const double a = std::abs(s.u[i]);
    const cplx res = -lap + omega * s.u[i] - (a > 0.0 ? std::pow(a, prm.p - 2.0) : 0.0) * s.u[i];
    acc += h * std::norm(res);
  }
  return std::sqrt(acc);
}

HybridState phase_gauge(const HybridState& s) {
  cplx ref = s.q;
  if (std::abs(ref) == 0.0) ref = s.u[0];
  if (std::abs(ref) == 0.0) return s;
  const cplx ph = std::conj(ref) / std::abs(ref);
  HybridState t = s;
  t.u *= ph;
  t.phi *= ph;
  t.q *= ph;
  if (std::abs(s.q) > 0.0) t.q = std::abs(s.q);
  return t;
}

MinimizerReport minimize_energy(const Params& prm, const Grids& grids, const SolverOptions& opt) {
  validate(prm);
  validate(grids.half);
  validate(grids.radial);
  validate(opt);
  const double lam = std::max(1.0, omega_rho(prm.rho));
  const double level = soliton_energy_line(prm.p, prm.mu);
  const double drift = opt.escape_fraction * grids.half.L;

  std::vector<std::pair<std::string, HybridState>> seeds;
  seeds.emplace_back("halfline-tail", halfline_seed(prm, grids, lam));
  try {
    PlaneSolveOptions po;
    po.grid = grids.radial;
    const PlaneGroundState pg = plane_ground_state(prm.r, prm.rho, prm.mu, po);
    HybridState s = HybridState::zeros(grids.half, grids.radial, pg.lambda_used);
    s.phi = pg.phi;
    s.q = pg.q;
    seeds.emplace_back("plane-ground-state", change_of_decomposition(s, lam));
  } catch (const SolverError&) {
  }
  if (prm.beta > 0.0) {
    const SpectrumResult sp = discrete_spectrum(prm);
    HybridState s = eigenfunction(prm, sp.eigenvalues.front(), grids.half, grids.radial);
    s.u *= std::sqrt(prm.mu);
    s.phi *= std::sqrt(prm.mu);
    s.q *= std::sqrt(prm.mu);
    seeds.emplace_back("linear-eigenfunction", change_of_decomposition(s, lam));
  }

  auto escaped = [&](const HybridState& s, double E) {
    return escape_fraction_of(s, drift) >= opt.escape_mass_fraction &&
           std::abs(E - level) <= opt.escape_energy_tolerance * std::abs(level);
  };

  MinimizerReport rep;
  rep.soliton_level = level;
  struct Done {
    detail::FlowResult res;
    MinimizerStatus status;
    std::string label;
  };
  std::vector<Done> done;
  for (auto& [label, seed] : seeds) {
    detail::FlowOptions fo;
    fo.max_iterations = opt.max_iterations;
    fo.tolerance = opt.tolerance;
    fo.armijo = opt.armijo;
    fo.momentum = opt.momentum;
    fo.monitor_every = opt.monitor_every;
    fo.monitor = [&](const HybridState& s, double E, int) { return escaped(s, E); };
    SeedOutcome so;
    so.label = label;
    so.initial_energy = energy_total(detail::project_mass(seed, prm.mu), prm).E_total;
    detail::FlowResult res = detail::run_flow(seed, prm, {}, fo);
    MinimizerStatus st = MinimizerStatus::MaxIterations;
    if (res.stopped_by_monitor || escaped(res.state, res.energy)) st = MinimizerStatus::EscapedHalfline;
    else if (res.converged) st = MinimizerStatus::Converged;
    so.final_energy = res.energy;
    so.status = st;
    so.iterations = res.iterations;
    so.gradient_norm = res.gradient_norm;
    so.monotone = res.monotone;
    rep.seeds.push_back(so);
    done.push_back({std::move(res), st, label});
  }

  // lowest energy among converged or escaped runs; unfinished runs only as a fallback
  const Done* best = nullptr;
  for (const Done& d : done) {
    if (d.status == MinimizerStatus::MaxIterations) continue;
    if (!best || d.res.energy < best->res.energy) best = &d;
  }
  if (!best)
    for (const Done& d : done)
      if (!best || d.res.energy < best->res.energy) best = &d;

  rep.state = phase_gauge(best->res.state);
  rep.energy = best->res.energy;
  rep.status = best->status;
  rep.iterations = best->res.iterations;
  rep.gradient_norm = best->res.gradient_norm;
  rep.seed_label = best->label;
  rep.multiplier = -2.0 * best->res.kappa;
  rep.omega_star = omega_star(rep.state, prm);
  rep.escape_mass_fraction = escape_fraction_of(rep.state, drift);
  rep.monotone = std::all_of(done.begin(), done.end(), [](const Done& d) { return d.res.monotone; });
  return rep;
}

bool Verification::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

Verification run_checks(const HybridState& s0, const Params& prm, double omega_el) {
  Verification v;
  auto add = [&](std::string name, bool ok, double value, double thr, std::string detail = "") {
    v.checks.push_back({std::move(name), ok, value, thr, std::move(detail)});
  };
  const HybridState s = phase_gauge(s0);
  const StateIntegrals I = integrals(s, prm.p, prm.r);
  const double mu = I.mass_u + I.mass_v;
  const double mu_u = I.mass_u, mu_v = I.mass_v;
  const double umax = s.u.cwiseAbs().maxCoeff();
  const bool has_u = mu_u > 1e-6 * mu, has_v = mu_v > 1e-6 * mu;

  // (1) support
  if (prm.beta > 0.0) {
    const double m = std::min(mu_u, mu_v) / mu;
    add("both-components", m > 1e-4, m, 1e-4, "min component mass / total");
  } else {
    const double m = std::min(mu_u, mu_v) / mu;
    add("one-component", m < 1e-6, m, 1e-6, "min component mass / total");
  }

  // (2) positivity after the phase gauge, up to rounding in the far tails
  {
    double worst = 0.0;
    if (has_u)
      for (int i = 0; i + 1 < s.hgrid.N; ++i) {
        worst = std::min(worst, s.u[i].real() / umax);
        worst = std::min(worst, -std::abs(s.u[i].imag()) / umax);
      }
    const bool q_ok = !has_v || (s.q.real() > 0.0 && s.q.imag() == 0.0);
    add("positive", q_ok && worst > -1e-9, worst, -1e-9, q_ok ? "min of u/max|u|" : "q not positive");
  }

  // (3) junction conditions at lambda = 1 and lambda = omega
  {
    const BCResidual a = bc_residual(s, prm, 1.0);
    const BCResidual b = bc_residual(s, prm, omega_el > 0.0 ? omega_el : 1.0);
    const double worst = std::max({a.res1, a.res2, b.res1, b.res2});
    add("boundary-conditions", worst < 1e-6, worst, 1e-6);
  }

  // (4) |v| nonincreasing in r (ties at rounding level allowed)
  {
    const VecC vf = planar_field(s);
    double vmax = 0.0;
    for (int j = 1; j < s.rgrid.M; ++j) vmax = std::max(vmax, std::abs(vf[j]));
    double worst = 0.0;
    for (int j = 1; j + 1 < s.rgrid.M; ++j) worst = std::max(worst, std::abs(vf[j + 1]) - std::abs(vf[j]));
    const double rel = vmax > 0.0 ? worst / vmax : 0.0;
    add("radially-nonincreasing", rel <= 1e-10, rel, 1e-10);
  }

  // (5) u is a translated soliton at frequency omega
  if (has_u && omega_el > 0.0) {
    const double p = prm.p, b = 2.0 / (p - 2.0);
    const double A = std::pow(p * omega_el / 2.0, 1.0 / (p - 2.0));
    const double k = (p - 2.0) * std::sqrt(omega_el) / 2.0;
    const double u0 = s.u[0].real();
    const double ratio = std::max(1.0, A / u0);
    double shift = std::acosh(std::pow(ratio, 1.0 / b)) / k;
    if (s.u[1].real() > u0) shift = -shift;  // peak inside the half-line
    double worst = 0.0;
    for (int i = 0; i < s.hgrid.N - 1; ++i)
      worst = std::max(worst, std::abs(s.u[i] - soliton_profile(p, omega_el, s.hgrid.x(i) + shift)));
    add("soliton-tail-fit", worst / umax < 1e-4, worst / umax, 1e-4, "sup |u - w(x + s)| / max|u|");
  } else if (has_u) {
    add("soliton-tail-fit", false, omega_el, 0.0, "nonpositive frequency");
  } else {
    add("soliton-tail-fit", true, 0.0, 1e-4, "no half-line component");
  }

  // (6) strictly below the soliton level
  {
    const double E = assemble(I, s, prm).E_total;
    const double level = soliton_energy_line(prm.p, mu);
    add("below-soliton-level", E < level, E - level, 0.0, "E - level");
  }

  // (7) Nehari and action identities at the multiplier frequency
  {
    const ActionValues a = action_suite(s, prm, omega_el);
    const double nehari = std::abs(a.I_omega) / (1.0 + std::abs(a.Q_omega));
    const double scale = 1.0 + std::abs(a.S_omega);
    const double id = std::max(std::abs(a.S_omega - a.S_tilde), std::abs(a.S_omega - a.A_omega)) / scale;
    add("nehari", nehari < 1e-6 && id < 1e-6, std::max(nehari, id), 1e-6, "I/(1+|Q|) and S = S~ = A");
  }

  // frequency above the linear binding energy
  {
    const double el = e_lin(prm);
    add("omega-above-e-lin", omega_el > el, omega_el - el, 0.0, "omega - E_lin");
  }
  return v;
}

}  // namespace

Verification verify_ground_state(const MinimizerReport& rep, const Params& prm) {
  if (rep.status != MinimizerStatus::Converged) {
    Verification v;
    v.checks.push_back({"converged", false, 0.0, 0.0, to_string(rep.status)});
    return v;
  }
  return run_checks(rep.state, prm, rep.multiplier);
}

Verification verify_state(const HybridState& s, const Params& prm) {
  return run_checks(s, prm, -2.0 * detail::multiplier(s, prm));
}

}  // namespace hnls
