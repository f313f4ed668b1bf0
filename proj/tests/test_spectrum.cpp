#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "hnls/functionals.hpp"
#include "hnls/plane2d.hpp"
#include "hnls/spectrum.hpp"

using namespace hnls;
using testing_support::rel;

namespace {

// half-line grid fine enough that the three-point u'(0) error s^3 h^2 / 3 is ~1e-9
HalfLineGrid bc_grid(double ell) {
  const double s = std::sqrt(-ell);
  const double L = 30.0 / s, h = std::sqrt(3e-9 / (s * s * s));
  return {L, int(std::ceil(L / h)) + 1};
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("least eigenvalue of the half-line Robin operator") {
  CHECK(least_eig_1d(-2.0) == -4.0);
  CHECK(least_eig_1d(3.0) == 0.0);
  CHECK(least_eig_1d(0.0) == 0.0);
}

TEST_CASE("secular residual") {
  const Params a = make_params(-1.5, 0.2, 0.0, 4.0, 3.0, 1.0);
  CHECK(eigen_residual(-2.25, a) == 0.0);
  CHECK(std::abs(eigen_residual(-omega_rho(0.2), a)) < 1e-15);
  const Params b = make_params(0.5, 0.1, 0.8, 4.0, 3.0, 1.0);
  const double lo = std::max(omega_rho(0.1), 0.0);
  CHECK(eigen_residual(-lo * 1.0001, b) < 0.0);
  CHECK(eigen_residual(-1e6, b) > 0.0);
  CHECK_THROWS_AS(eigen_residual(0.0, b), DomainError);
  for (double nu : {-0.3, -2.0, -17.0})
    CHECK(eigen_residual(nu, b) == doctest::Approx(oracle::secular(std::sqrt(-nu), 0.5, 0.1, 0.8)).epsilon(1e-13));
}

TEST_CASE("decoupled table") {
  const double w0 = omega_rho(0.0);
  {
    const SpectrumResult s = discrete_spectrum(make_params(1.0, 0.0, 0.0, 4.0, 3.0, 1.0));
    REQUIRE(s.eigenvalues.size() == 1);
    CHECK(std::abs(s.eigenvalues[0] + 1.2609470) < 1e-6);
    CHECK(std::abs(s.e_lin - w0) < 1e-15);
  }
  {
    const SpectrumResult s = discrete_spectrum(make_params(-2.0, 0.0, 0.0, 4.0, 3.0, 1.0));
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(s.eigenvalues[0] == -4.0);
    CHECK(std::abs(s.eigenvalues[1] + w0) < 1e-15);
    CHECK(s.e_lin == 4.0);
  }
}

TEST_CASE("coupled least eigenvalue matches the fine-scan oracle") {
  const SpectrumResult s = discrete_spectrum(make_params(0.0, 0.0, 1.0, 4.0, 3.0, 1.0));
  REQUIRE(s.eigenvalues.size() == 1);
  const auto roots = oracle::secular_roots(0.0, 0.0, 1.0);
  REQUIRE(roots.size() == 1);
  CHECK(rel(s.eigenvalues[0], -roots[0] * roots[0]) < 1e-10);
  CHECK(s.eigenvalues[0] == doctest::Approx(-20.3877990189233).epsilon(1e-11));
}

TEST_CASE("random coupled triples") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> A(-2.0, 2.0), R(-0.3, 1.0), B(0.05, 2.0);
  for (int k = 0; k < 40; ++k) {
    const double alpha = A(rng), rho = R(rng), beta = B(rng);
    const Params prm = make_params(alpha, rho, beta, 4.0, 3.0, 1.0);
    const SpectrumResult s = discrete_spectrum(prm);
    const double ell_a = alpha < 0 ? alpha * alpha : 0.0, w = omega_rho(rho);
    CHECK(s.eigenvalues.front() < std::min(-ell_a, -w));
    CHECK(s.eigenvalues.size() == (alpha < 0 ? 2u : 1u));
    if (alpha < 0) {
      CHECK(s.eigenvalues[1] > std::max(-ell_a, -w));
      CHECK(s.eigenvalues[1] < 0.0);
    }
    // decay rates from the oracle, largest first: linear scan, then the log scan below it
    const double smax = 100.0;
    const int n = 200000;
    std::vector<double> logs;
    for (double r : oracle::secular_roots(alpha, rho, beta, smax, n)) logs.push_back(std::log(r));
    for (double t : oracle::secular_small_log_roots(alpha, rho, beta, std::log(smax / n))) logs.push_back(t);
    std::sort(logs.begin(), logs.end(), std::greater<>());
    REQUIRE(logs.size() == s.eigenvalues.size());
    REQUIRE(s.log_decay.size() == s.eigenvalues.size());
    for (std::size_t j = 0; j < logs.size(); ++j) {
      CHECK(std::abs(s.log_decay[j] - logs[j]) < 1e-9 * std::max(1.0, std::abs(logs[j])));
      if (logs[j] > -300.0) CHECK(rel(s.eigenvalues[j], -std::exp(2.0 * logs[j])) < 1e-9);
    }
  }
}

TEST_CASE("nearly Neumann half-line: the upper eigenvalue below double range") {
  const Params prm = make_params(-1e-4, 0.0, 1.0, 4.0, 3.0, 1.0);
  const SpectrumResult s = discrete_spectrum(prm);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(s.eigenvalues[1] < 0.0);
  CHECK(s.eigenvalues[1] > -1e-300);
  const auto logs = oracle::secular_small_log_roots(-1e-4, 0.0, 1.0, std::log(1e-4), -1e6);
  REQUIRE(logs.size() == 1);
  CHECK(s.log_decay[1] == doctest::Approx(logs[0]).epsilon(1e-10));
  CHECK(s.log_decay[1] < -6e4);
}

TEST_CASE("E_lin is nondecreasing in beta") {
  for (double alpha : {-1.0, 0.0, 0.7})
    for (double rho : {-0.1, 0.3}) {
      double prev = 0.0;
      for (double beta : {0.0, 0.5, 1.0, 2.0}) {
        const double e = e_lin(make_params(alpha, rho, beta, 4.0, 3.0, 1.0));
        CHECK(e > 0.0);
        CHECK(e >= prev);
        prev = e;
      }
    }
}

TEST_CASE("eigenfunctions satisfy the junction conditions and the eigen-relation") {
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> A(-1.5, 1.5), R(-0.2, 0.8), B(0.1, 1.5);
  for (int k = 0; k < 6; ++k) {
    const Params prm = make_params(A(rng), R(rng), B(rng), 4.0, 3.0, 1.0);
    const SpectrumResult sp = discrete_spectrum(prm);
    for (double ell : sp.eigenvalues) {
      const HybridState st = eigenfunction(prm, ell, bc_grid(ell), {});
      CHECK(std::abs(mass(st) - 1.0) < 1e-12);
      const BCResidual r = bc_residual(st, prm, -ell);
      CHECK(r.res1 < 1e-8);
      CHECK(r.res2 < 1e-8);
      const FunctionalValues f = energy_total(st, prm);
      CHECK(std::abs(f.Q_total / f.mass - ell) < 1e-4 * std::abs(ell));
    }
  }
}

TEST_CASE("decoupled eigenfunctions") {
  const Params prm = make_params(-0.8, 0.1, 0.0, 4.0, 3.0, 1.0);
  const double w = omega_rho(0.1);
  const HybridState pl = eigenfunction(prm, -w);
  CHECK(pl.u.norm() == 0.0);
  CHECK(std::abs(pl.q) > 0.0);
  CHECK(pl.phi.norm() == 0.0);
  const HybridState hl = eigenfunction(prm, -0.64, bc_grid(-0.64));
  CHECK(hl.q == cplx(0.0));
  CHECK(bc_residual(hl, prm, 1.0).res1 < 1e-8);
  CHECK_THROWS_AS(eigenfunction(prm, -0.5), DomainError);
  CHECK_THROWS_AS(eigenfunction(make_params(0.0, 0.0, 1.0, 4.0, 3.0, 1.0), -3.0), DomainError);
}

TEST_CASE("zero state has zero junction residual") {
  const BCResidual r = bc_residual(HybridState::zeros({}, {}), make_params(0.3, 0.2, 0.5, 4.0, 3.0, 1.0), 1.0);
  CHECK(r.res1 == 0.0);
  CHECK(r.res2 == 0.0);
}

TEST_CASE("E_lin bounds the Rayleigh quotient of random states") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> A(-1.0, 1.0), R(-0.2, 0.5), B(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Params prm = make_params(A(rng), R(rng), B(rng), 4.0, 3.0, 1.0);
    const HybridState s = testing_support::random_state(rng);
    const FunctionalValues f = energy_total(s, prm);
    CHECK(f.Q_total / f.mass >= -e_lin(prm) - 1e-6);
  }
}

}  // TEST_SUITE
