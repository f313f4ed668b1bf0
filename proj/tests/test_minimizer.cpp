#include "doctest.h"
#include "helpers.hpp"

#include "hnls/functionals.hpp"
#include "hnls/minimizer.hpp"
#include "hnls/soliton1d.hpp"
#include "hnls/spectrum.hpp"

using namespace hnls;
using testing_support::rel;

namespace {

double component_mass_u(const HybridState& s) {
  HybridState t = s;
  t.phi.setZero();
  t.q = 0.0;
  return mass(t);
}

const Check* find(const Verification& v, const std::string& name) {
  for (const auto& c : v.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_SUITE("minimizer") {

TEST_CASE("options validation") {
  SolverOptions o;
  CHECK_NOTHROW(validate(o));
  o.tolerance = 0.0;
  CHECK_THROWS(validate(o));
}

TEST_CASE("decoupled: segregated on the half-line, matching the tail solver") {
  const Params prm = make_params(-1.0, 10.0, 0.0, 4.0, 3.0, 1.0);
  const MinimizerReport rep = minimize_energy(prm);
  REQUIRE(rep.status == MinimizerStatus::Converged);
  CHECK(rep.monotone);
  CHECK(std::abs(mass(rep.state) - 1.0) < 1e-12);
  const double mu_u = component_mass_u(rep.state);
  CHECK(1.0 - mu_u < 1e-6);
  const HalflineGroundState hg = halfline_ground_state(4.0, -1.0, 1.0);
  CHECK(rel(rep.energy, hg.energy) < 1e-4);
  // winner is no worse than any seed start
  for (const auto& s : rep.seeds) CHECK(rep.energy <= s.initial_energy + 1e-14);

  const Verification v = verify_ground_state(rep, prm);
  const Check* one = find(v, "one-component");
  REQUIRE(one);
  CHECK(one->passed);

  // Euler-Lagrange residual with omega_star and omega_star > E_lin
  CHECK(rep.omega_star > e_lin(prm));
  CHECK(halfline_el_residual(rep.state, prm, rep.omega_star) < 1e-5);
}

TEST_CASE("omega_star is the ratio of independently assembled terms") {
  const Params prm = make_params(-0.5, 0.2, 0.6, 4.0, 3.0, 1.0);
  std::mt19937 rng(31);
  HybridState s = testing_support::random_state(rng, {20.0, 401}, {20.0, 401, 2.0});
  const StateIntegrals I = integrals(s, prm.p, prm.r);
  const FunctionalValues f = energy_total(s, prm);
  const double expect = (I.pow_u + I.pow_v - f.Q_total) / f.mass;
  CHECK(std::abs(omega_star(s, prm) - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
  CHECK_THROWS(omega_star(HybridState::zeros({}, {}), prm));
}

TEST_CASE("coupled: both components, Nehari, multiplier") {
  const Params prm = make_params(0.0, 0.0, 1.0, 4.0, 3.0, 1.0);
  const MinimizerReport rep = minimize_energy(prm);
  REQUIRE(rep.status == MinimizerStatus::Converged);
  CHECK(rep.monotone);
  const double mu_u = component_mass_u(rep.state);
  CHECK(mu_u > 1e-4);
  CHECK(1.0 - mu_u > 1e-4);
  CHECK(rep.state.q.real() > 0.0);
  CHECK(rep.state.q.imag() == 0.0);
  CHECK(rep.omega_star > e_lin(prm));
  CHECK(rep.energy < soliton_energy_line(4.0, 1.0));
  const Verification v = verify_ground_state(rep, prm);
  for (const char* name : {"both-components", "positive", "radially-nonincreasing", "soliton-tail-fit",
                           "below-soliton-level", "nehari", "omega-above-e-lin"}) {
    const Check* c = find(v, name);
    REQUIRE(c);
    CHECK_MESSAGE(c->passed, name, " value ", c->value);
  }
}

TEST_CASE("small mass lies below the linear bound") {
  for (double beta : {0.0, 0.5}) {
    const Params prm = make_params(0.5, 0.1, beta, 4.0, 3.0, 0.05);
    const MinimizerReport rep = minimize_energy(prm);
    CHECK(rep.status == MinimizerStatus::Converged);
    CHECK(rep.energy < -0.5 * e_lin(prm) * prm.mu);
  }
}

TEST_CASE("mass escapes along the half-line beyond rho*") {
  const Params prm = make_params(1.0, 10.0, 0.0, 4.0, 3.0, 1.0);
  const MinimizerReport rep = minimize_energy(prm);
  CHECK(rep.status == MinimizerStatus::EscapedHalfline);
  CHECK(rel(rep.energy, soliton_energy_line(4.0, 1.0)) < 1e-3);
  CHECK(rep.escape_mass_fraction >= 0.9);
}

TEST_CASE("a scaled eigenfunction is not on the Nehari manifold") {
  const Params prm = make_params(0.0, 0.0, 1.0, 4.0, 3.0, 1.0);
  const double ell = discrete_spectrum(prm).eigenvalues.front();
  HybridState s = eigenfunction(prm, ell);
  s.u *= std::sqrt(prm.mu);
  s.q *= std::sqrt(prm.mu);
  const Verification v = verify_state(s, prm);
  const Check* c = find(v, "nehari");
  REQUIRE(c);
  CHECK_FALSE(c->passed);
}

TEST_CASE("non-converged runs are reported, not verified") {
  const Params prm = make_params(0.0, 0.0, 1.0, 4.0, 3.0, 1.0);
  SolverOptions o;
  o.max_iterations = 2;
  const MinimizerReport rep = minimize_energy(prm, {}, o);
  CHECK(rep.status == MinimizerStatus::MaxIterations);
  const Verification v = verify_ground_state(rep, prm);
  CHECK_FALSE(v.all_passed());
}

TEST_CASE("phase gauge") {
  std::mt19937 rng(32);
  const HybridState s = testing_support::random_state(rng, {20.0, 201}, {20.0, 201, 2.0});
  const HybridState g = phase_gauge(s);
  CHECK(g.q.imag() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.q.real() > 0.0);
  CHECK(std::abs(mass(g) - mass(s)) < 1e-12);
}

}  // TEST_SUITE
