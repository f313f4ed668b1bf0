#include "hnls/classify.hpp"

#include "hnls/plane2d.hpp"
#include "hnls/soliton1d.hpp"
#include "hnls/spectrum.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace hnls {

namespace {

void check_pr(double p, double r) {
  if (!(p > 2.0 && p < 6.0)) throw DomainError("p must lie in (2, 6)");
  if (!(r > 2.0 && r < 4.0)) throw DomainError("r must lie in (2, 4)");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

using GridKey = std::tuple<double, int, double>;
GridKey key_of(const RadialGrid& g) { return {g.R, g.M, g.g}; }

TauEstimate cached_tau(double r, const RadialGrid& grid) {
  static std::mutex m;
  static std::map<std::pair<double, GridKey>, TauEstimate> cache;
  const auto key = std::make_pair(r, key_of(grid));
  {
    std::lock_guard<std::mutex> lock(m);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  PlaneSolveOptions opt;
  opt.grid = grid;
  const TauEstimate t = tau_r_estimate(r, opt);
  std::lock_guard<std::mutex> lock(m);
  cache[key] = t;
  return t;
}

struct CachedRho {
  bool found = false;
  RhoStar value;
  std::string why;
};

CachedRho cached_rho_star(double p, double r, double mu, const RadialGrid& grid) {
  static std::mutex m;
  static std::map<std::tuple<double, double, double, GridKey>, CachedRho> cache;
  const auto key = std::make_tuple(p, r, mu, key_of(grid));
  {
    std::lock_guard<std::mutex> lock(m);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  CachedRho c;
  try {
    c.value = rho_star(p, r, mu, grid);
    c.found = true;
  } catch (const NoRhoStar& e) {
    c.why = e.what();
  }
  std::lock_guard<std::mutex> lock(m);
  cache[key] = c;
  return c;
}

}  // namespace

double r_star(double p) {
  if (!(p > 2.0 && p < 6.0)) throw DomainError("r_star: p must lie in (2, 6)");
  return (6.0 * p - 4.0) / (p + 2.0);
}

bool at_r_star(double p, double r) {
  const double rs = r_star(p);
  return std::abs(r - rs) < 1e-6 * rs;
}

double mu_threshold_exponent(double p, double r) {
  check_pr(p, r);
  if (at_r_star(p, r)) throw DomainError("mu_threshold: undefined at r = (6p - 4)/(p + 2)");
  return (p * r - 4.0 * p - 6.0 * r + 24.0) / (6.0 * p - 2.0 * r - p * r - 4.0);
}

double mu_threshold(double p, double r, double tau) {
  const double e = mu_threshold_exponent(p, r);
  return std::pow(tau / theta_p(p), e);
}

double mu_threshold(double p, double r) { return mu_threshold(p, r, tau_r(r)); }

RhoStar rho_star(double p, double r, double mu, const RadialGrid& grid) {
  check_pr(p, r);
  if (!(mu > 0.0)) throw DomainError("rho_star: mass must be positive");
  const double level = soliton_energy_line(p, mu);
  PlaneSolveOptions opt;
  opt.grid = grid;
  int evals = 0;
  auto f = [&](double rho) {
    ++evals;
    return plane_ground_state(r, rho, mu, opt).energy - level;
  };

  // E_rho(mu) increases in rho; grow [-1, 1] until it straddles the level
  double lo = -1.0, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  while (flo >= 0.0) {
    hi = lo;
    fhi = flo;
    lo *= 2.0;
    if (lo < -64.0) throw NoRhoStar("rho_star: planar level stays above the soliton level");
    flo = f(lo);
  }
  while (fhi <= 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    if (hi > 4096.0)
      throw NoRhoStar("rho_star: planar level stays below the soliton level up to rho = 4096");
    fhi = f(hi);
  }
  boost::uintmax_t iters = 100;
  const auto br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                    boost::math::tools::eps_tolerance<double>(36), iters);
  RhoStar out;
  out.value = 0.5 * (br.first + br.second);
  const PlaneGroundState gs = plane_ground_state(r, out.value, mu, opt);
  out.residual = gs.energy - level;
  out.q = gs.q;
  // discretization error of E transferred to rho through dE/drho = q^2 / 2
  PlaneSolveOptions half = opt;
  half.grid.M = (grid.M + 1) / 2;
  const double dE = std::abs(plane_ground_state(r, out.value, mu, half).energy - gs.energy);
  const double slope = 0.5 * gs.q * gs.q;
  out.error = slope > 0.0 ? dE / slope : std::numeric_limits<double>::infinity();
  out.evaluations = evals + 2;
  return out;
}

double k_star(const Params& prm) {
  validate(prm);
  if (!(prm.beta > 0.0)) throw DomainError("k_star: requires beta > 0");
  const double ap = alpha_threshold(prm.p, prm.mu).value;
  if (prm.alpha == ap) throw DomainError("k_star: undefined at alpha = alpha_p(mu)");
  if (prm.alpha < ap) return std::numeric_limits<double>::infinity();
  return prm.beta * prm.beta / (prm.alpha - ap);
}

std::string to_string(Label l) {
  switch (l) {
    case Label::Exists: return "Exists";
    case Label::NotExists: return "NotExists";
    case Label::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

// everything except rho_star, which is only computed when it exists
ThresholdReport base_thresholds(const Params& prm, const ClassifyBudget& budget) {
  ThresholdReport t;
  t.theta_p = theta_p(prm.p);
  const TauEstimate te = cached_tau(prm.r, budget.grids.radial);
  t.tau_r = te.value;
  t.tau_r_error = te.error;
  t.r_star = r_star(prm.p);
  if (!at_r_star(prm.p, prm.r)) t.mu_threshold = mu_threshold(prm.p, prm.r, t.tau_r);
  const AlphaThreshold at = alpha_threshold(prm.p, prm.mu);
  t.alpha_p = at.value;
  t.alpha_p_exact = at.exact;
  if (prm.beta > 0.0 && prm.alpha > at.value) t.k_star = prm.beta * prm.beta / (prm.alpha - at.value);
  t.e_lin = e_lin(prm);
  t.soliton_level = soliton_energy_line(prm.p, prm.mu);
  t.free_plane_level = -t.tau_r * std::pow(prm.mu, 2.0 / (4.0 - prm.r));
  return t;
}

// level gap and its guard band: positive gap means the free plane is lower
struct PlaneGap {
  double gap = 0.0;
  double band = 0.0;
  bool holds() const { return gap > band; }
  bool fails() const { return gap < -band; }
};

PlaneGap plane_gap(const ThresholdReport& t, const Params& prm) {
  PlaneGap g;
  g.gap = t.soliton_level - t.free_plane_level;
  g.band = 3.0 * t.tau_r_error * std::pow(prm.mu, 2.0 / (4.0 - prm.r));
  return g;
}

}  // namespace

ThresholdReport thresholds(const Params& prm, const ClassifyBudget& budget) {
  validate(prm);
  ThresholdReport t = base_thresholds(prm, budget);
  if (!at_r_star(prm.p, prm.r) && plane_gap(t, prm).fails()) {
    const CachedRho c = cached_rho_star(prm.p, prm.r, prm.mu, budget.grids.radial);
    if (c.found) {
      t.rho_star = c.value.value;
      t.rho_star_error = c.value.error;
    }
  }
  return t;
}

Classification classify(const Params& prm, const ClassifyBudget& budget) {
  validate(prm);
  Classification out;
  try {
    out.thresholds = thresholds(prm, budget);
  } catch (const std::exception& e) {
    out.rule = "error";
    out.justification.push_back(std::string("thresholds failed: ") + e.what());
    return out;
  }
  const ThresholdReport& t = out.thresholds;
  auto& why = out.justification;
  const bool rstar = at_r_star(prm.p, prm.r);
  const PlaneGap gap = plane_gap(t, prm);

  std::vector<std::string> exists_rules, not_rules;

  // R1: free planar level strictly below the soliton level
  if (rstar) {
    why.push_back("R1 skipped: r = r* = " + fmt(t.r_star));
  } else if (gap.holds()) {
    exists_rules.push_back("R1");
    why.push_back("R1 fired: free planar level " + fmt(t.free_plane_level) + " < soliton level " +
                  fmt(t.soliton_level) + " by " + fmt(gap.gap) + " (guard " + fmt(gap.band) +
                  "), mu_threshold = " + fmt(*t.mu_threshold));
  } else {
    why.push_back("R1 not met: soliton level - free planar level = " + fmt(gap.gap) + " (guard " +
                  fmt(gap.band) + ")");
  }

  // R2 / its complement: alpha against alpha_p(mu)
  const double aband = (t.alpha_p_exact ? 1e-12 : 1e-9) * std::abs(t.alpha_p);
  const bool alpha_small = prm.alpha < t.alpha_p - aband;
  const bool alpha_large = prm.alpha > t.alpha_p + aband;
  if (alpha_small) {
    exists_rules.push_back("R2");
    why.push_back("R2 fired: alpha = " + fmt(prm.alpha) + " < alpha_p(mu) = " + fmt(t.alpha_p));
  } else {
    why.push_back("R2 not met: alpha = " + fmt(prm.alpha) + ", alpha_p(mu) = " + fmt(t.alpha_p) +
                  (alpha_large ? "" : " (inside guard band)"));
  }

  // R3: the linear ground state alone beats the soliton
  const double lin_level = -0.5 * t.e_lin * prm.mu;
  if (lin_level < t.soliton_level - 1e-12 * std::abs(t.soliton_level)) {
    exists_rules.push_back("R3");
    why.push_back("R3 fired: -E_lin mu / 2 = " + fmt(lin_level) + " < soliton level " + fmt(t.soliton_level));
  } else {
    why.push_back("R3 not met: -E_lin mu / 2 = " + fmt(lin_level));
  }

  // R4-R6 need rho*, which exists only when the free plane loses
  const bool hyp = !rstar && gap.fails();
  if (hyp && t.rho_star) {
    const double rs = *t.rho_star, band = 3.0 * t.rho_star_error;
    const std::string rs_txt = "rho* = " + fmt(rs) + " (guard " + fmt(band) + ")";
    if (prm.beta == 0.0) {
      if (!alpha_large) {
        why.push_back("R4 not applicable: alpha not above alpha_p(mu)");
      } else if (prm.rho > rs + band) {
        not_rules.push_back("R4");
        why.push_back("R4 fired: beta = 0, rho = " + fmt(prm.rho) + " > " + rs_txt);
      } else if (prm.rho < rs - band) {
        // the beta = 0 statement is an equivalence
        exists_rules.push_back("R4");
        why.push_back("R4 fired: beta = 0, rho = " + fmt(prm.rho) + " < " + rs_txt);
      } else {
        why.push_back("R4 undecided: rho = " + fmt(prm.rho) + " inside guard band of " + rs_txt);
      }
    } else {
      if (alpha_large && prm.rho > rs + t.k_star + band) {
        not_rules.push_back("R5");
        why.push_back("R5 fired: rho = " + fmt(prm.rho) + " > rho* + k* = " + fmt(rs) + " + " + fmt(t.k_star) +
                      " (guard " + fmt(band) + ")");
      } else {
        why.push_back("R5 not met: k* = " + fmt(t.k_star) + ", " + rs_txt);
      }
      if (prm.rho < rs - band) {
        exists_rules.push_back("R6");
        why.push_back("R6 fired: beta > 0, rho = " + fmt(prm.rho) + " < " + rs_txt);
      } else {
        why.push_back("R6 not met: rho = " + fmt(prm.rho) + ", " + rs_txt);
      }
    }
  } else if (hyp) {
    why.push_back("R4-R6 skipped: rho* not found");
  } else {
    why.push_back("R4-R6 skipped: " + std::string(rstar ? "r = r*" : "free planar level not above the soliton level"));
  }

  if (!exists_rules.empty() && !not_rules.empty()) {
    out.conflict = true;
    out.rule = "conflict";
    why.push_back("CONFLICT: " + exists_rules.front() + " and " + not_rules.front() + " both fired");
    return out;
  }
  if (!exists_rules.empty()) {
    out.label = Label::Exists;
    out.rule = exists_rules.front();
    return out;
  }
  if (!not_rules.empty()) {
    out.label = Label::NotExists;
    out.rule = not_rules.front();
    return out;
  }
  if (rstar) {
    out.rule = "r*";
    why.push_back("Unknown: r = r* and no unconditional rule fired");
    return out;
  }
  if (!budget.run_solver) {
    out.rule = "R7";
    why.push_back("R7 skipped: solver disabled");
    return out;
  }

  // R7: a converged competitor below the soliton level certifies existence
  try {
    const MinimizerReport rep = minimize_energy(prm, budget.grids, budget.solver);
    out.energy = rep.energy;
    out.solver_status = rep.status;
    out.rule = "R7";
    const double tol = budget.solver.escape_energy_tolerance * std::abs(t.soliton_level);
    if (rep.status == MinimizerStatus::Converged && rep.energy <= t.soliton_level - tol) {
      out.label = Label::Exists;
      why.push_back("R7 fired: solver energy " + fmt(rep.energy) + " <= soliton level " + fmt(t.soliton_level) +
                    " - " + fmt(tol));
    } else {
      why.push_back("R7 inconclusive: status " + to_string(rep.status) + ", energy " + fmt(rep.energy) +
                    ", soliton level " + fmt(t.soliton_level) + " (margin " + fmt(tol) + ")");
    }
  } catch (const std::exception& e) {
    out.rule = "R7";
    why.push_back(std::string("R7 solver error: ") + e.what());
  }
  return out;
}

std::size_t SweepSpec::size() const {
  return alpha.size() * rho.size() * beta.size() * p.size() * r.size() * mu.size();
}

Params SweepSpec::point(std::size_t k) const {
  Params prm;
  prm.mu = mu[k % mu.size()];
  k /= mu.size();
  prm.rho = rho[k % rho.size()];
  k /= rho.size();
  prm.beta = beta[k % beta.size()];
  k /= beta.size();
  prm.alpha = alpha[k % alpha.size()];
  k /= alpha.size();
  prm.r = r[k % r.size()];
  k /= r.size();
  prm.p = p[k % p.size()];
  return prm;
}

std::vector<SweepRow> phase_diagram(const SweepSpec& sweep, const ClassifyBudget& budget, int jobs) {
  const std::size_t n = sweep.size();
  std::vector<SweepRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      SweepRow& row = rows[k];
      row.params = sweep.point(k);
      try {
        row.result = classify(row.params, budget);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const int w = std::max(1, std::min<int>(jobs, int(n)));
  std::vector<std::thread> pool;
  for (int i = 1; i < w; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace hnls
