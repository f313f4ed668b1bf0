#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "hnls/soliton1d.hpp"

using namespace hnls;
using testing_support::rel;

namespace {

// w'' + w^{p-1} - omega w by a five-point stencil
double ode_residual(const std::function<double(double)>& w, double p, double omega, double x) {
  const double h = 1e-3;
  const double d2 = (-w(x + 2 * h) + 16 * w(x + h) - 30 * w(x) + 16 * w(x - h) - w(x - 2 * h)) / (12 * h * h);
  return d2 + std::pow(w(x), p - 1.0) - omega * w(x);
}

// whole-line energy of the soliton at frequency omega by Simpson quadrature
double soliton_energy_quadrature(double p, double omega) {
  const double b = 2.0 / (p - 2.0), k = (p - 2.0) * std::sqrt(omega) / 2.0;
  auto w = [&](double x) { return soliton_profile(p, omega, x); };
  auto dens = [&](double x) {
    const double dw = -b * k * std::tanh(k * x) * w(x);
    return 0.5 * dw * dw - std::pow(w(x), p) / p;
  };
  const double X = 60.0 / k;
  return oracle::simpson(dens, -X, X, 400000);
}

}  // namespace

TEST_SUITE("soliton1d") {

TEST_CASE("soliton profile") {
  CHECK(soliton_profile(4.0, 1.0, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (double p : {2.5, 3.0, 4.0, 5.0, 5.5})
    for (double x : {0.1, 0.7, 2.3}) CHECK(soliton_profile(p, 1.3, x) == soliton_profile(p, 1.3, -x));
  // w = sqrt(2) sech x: w'' = w (1 - 2 sech^2 x) by hand
  for (double x : {0.0, 0.4, 1.1, 3.0}) {
    const double w = soliton_profile(4.0, 1.0, x), sech = 1.0 / std::cosh(x);
    const double d2 = w * (1.0 - 2.0 * sech * sech);
    CHECK(std::abs(d2 + w * w * w - w) < 1e-10);
  }
  for (double p : {2.5, 3.0, 4.0, 5.0, 5.5})
    for (double x : {0.0, 0.3, 1.2, 4.0}) {
      auto w = [p](double y) { return soliton_profile(p, 0.8, y); };
      CHECK(std::abs(ode_residual(w, p, 0.8, x)) < 1e-8);
    }
  CHECK_THROWS_AS(soliton_profile(6.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(soliton_profile(4.0, 0.0, 0.0), DomainError);
}

TEST_CASE("soliton mass and energy against Beta forms and quadrature") {
  for (double p : {2.5, 3.0, 4.0, 5.0, 5.5})
    for (double w : {0.3, 1.0, 2.0}) {
      const Soliton1D s = make_soliton(p, w);
      CHECK(rel(s.mass, oracle::soliton_mass(p, w)) < 1e-12);
      CHECK(rel(s.energy, soliton_energy_quadrature(p, w)) < 1e-8);
    }
}

TEST_CASE("theta_p") {
  CHECK(std::abs(theta_p(4.0) - 1.0 / 96.0) < 1e-6);
  CHECK(theta_p(4.0) == doctest::Approx(1.0 / 96.0).epsilon(1e-13));
  for (double p : {2.5, 3.0, 4.0, 5.0, 5.5}) CHECK(theta_p(p) > 0.0);
  // scaling law against direct quadrature at the matching frequency
  for (double p : {3.0, 4.0, 5.0})
    for (double mu : {0.5, 1.0, 2.0}) {
      const double w = soliton_omega_for_mass(p, mu);
      CHECK(rel(oracle::soliton_mass(p, w), mu) < 1e-12);
      CHECK(rel(soliton_energy_line(p, mu), soliton_energy_quadrature(p, w)) < 1e-5);
    }
}

TEST_CASE("soliton energy line") {
  CHECK(soliton_energy_line(4.0, 2.0) == doctest::Approx(-1.0 / 12.0).epsilon(1e-13));
  CHECK(soliton_energy_line(4.0, 0.0) == 0.0);
  for (double p : {3.0, 4.0, 5.0}) {
    double prev = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double h = 0.3, mu = h * k;
      const double e = soliton_energy_line(p, mu);
      CHECK(e < prev);
      CHECK(soliton_energy_line(p, mu - h) - 2.0 * e + soliton_energy_line(p, mu + h) < 0.0);
      prev = e;
    }
  }
}

TEST_CASE("mu_p(alpha)") {
  CHECK(std::abs(mu_p_of_alpha(4.0, 1.0) - 4.0) < 1e-6);
  for (double p : {3.0, 4.0, 5.0}) {
    CHECK(rel(mu_p_of_alpha(p, 1.4) / mu_p_of_alpha(p, 0.7), std::pow(2.0, (6.0 - p) / (p - 2.0))) < 1e-12);
    CHECK(rel(mu_p_of_alpha(p, 0.9), oracle::soliton_mass(p, 0.81)) < 1e-12);
    CHECK(std::abs(mu_p_of_alpha(p, 1.0 + 1e-9) - mu_p_of_alpha(p, 1.0)) < 1e-7);
  }
  CHECK_THROWS_AS(mu_p_of_alpha(4.0, 0.0), DomainError);
}

TEST_CASE("C_p") {
  CHECK(c_p(4.0) == 0.25);
  CHECK(c_p(3.0) == doctest::Approx(std::pow(2.0 / 3.0, 2.0 / 3.0) * std::pow(3.0 / 8.0, 1.0 / 3.0)).epsilon(1e-13));
  CHECK(c_p(3.0) == doctest::Approx(0.5503).epsilon(1e-4));
  for (double p : {2.5, 3.5, 4.5, 5.5}) {
    const double I = oracle::sech_power_integral_half((4.0 - p) / (p - 2.0));
    const double ref = std::pow(2.0 / p, 2.0 / (6.0 - p)) * std::pow((p - 2.0) / (4.0 * I), (p - 2.0) / (6.0 - p));
    CHECK(std::abs(c_p(p) - ref) < 1e-8);
  }
}

TEST_CASE("alpha threshold") {
  const AlphaThreshold a1 = alpha_threshold(4.0, 1.0);
  CHECK(a1.exact);
  CHECK(a1.value == 0.25);
  CHECK(alpha_threshold(4.0, 2.0).value == doctest::Approx(0.5).epsilon(1e-15));
  for (double mu : {0.3, 1.7, 3.0}) CHECK(alpha_threshold(4.0, mu).value == doctest::Approx(mu / 4.0).epsilon(1e-15));
  const AlphaThreshold a5 = alpha_threshold(5.0, 1.0);
  CHECK_FALSE(a5.exact);
  CHECK(a5.value > c_p(5.0));
}

TEST_CASE("half-line ground state") {
  SUBCASE("Neumann: half of the doubled soliton") {
    for (double p : {3.0, 4.0, 5.0}) {
      const HalflineGroundState g = halfline_ground_state(p, 0.0, 1.0);
      REQUIRE(g.candidates == 1);
      CHECK(g.shift == 0.0);
      CHECK(rel(g.energy, 0.5 * soliton_energy_line(p, 2.0)) < 1e-12);
    }
  }
  SUBCASE("above the threshold no tail beats the soliton") {
    CHECK_FALSE(halfline_ground_state(4.0, 0.3, 1.0).exists);
  }
  SUBCASE("negative alpha") {
    const HalflineGroundState g = halfline_ground_state(4.0, -1.0, 1.0);
    CHECK(g.exists);
    CHECK(g.energy < -1.0 / 96.0);
  }
  SUBCASE("profile solves the ODE with the Robin condition and the mass") {
    for (double p : {3.0, 4.0, 5.0})
      for (double alpha : {-1.0, -0.2, 0.1}) {
        const HalflineGroundState g = halfline_ground_state(p, alpha, 1.0);
        if (!g.candidates) continue;
        auto w = [&](double x) { return g(x); };
        for (double x : {0.01, 0.5, 2.0}) CHECK(std::abs(ode_residual(w, p, g.omega, x)) < 1e-8);
        const double h = 1e-5;
        CHECK(std::abs((g(h) - g(-h)) / (2 * h) - alpha * g(0.0)) < 1e-8);
        CHECK(rel(oracle::simpson([&](double x) { return g(x) * g(x); }, 0.0, 60.0, 200000), 1.0) < 1e-9);
      }
  }
  SUBCASE("negative alpha lies below the soliton level") {
    for (double p : {3.0, 4.0, 5.0})
      for (double a : {-2.0, -0.5, -0.01}) {
        const HalflineGroundState g = halfline_ground_state(p, a, 1.0);
        CHECK(g.exists);
        CHECK(g.energy < g.level);
      }
  }
}

TEST_CASE("existence switches at alpha_4(mu)") {
  for (double mu : {0.5, 1.0, 2.0}) {
    const double a = alpha_threshold(4.0, mu).value;
    CHECK(halfline_ground_state(4.0, a * (1.0 - 1e-3), mu).exists);
    CHECK_FALSE(halfline_ground_state(4.0, a * (1.0 + 1e-3), mu).exists);
  }
}

TEST_CASE("half-line level is concave in the mass") {
  for (double p : {3.0, 4.0, 5.0}) {
    const double alpha = -0.5, h = 0.25;
    for (double mu = 0.5; mu < 3.0; mu += 0.5) {
      const double e0 = halfline_ground_state(p, alpha, mu - h).energy;
      const double e1 = halfline_ground_state(p, alpha, mu).energy;
      const double e2 = halfline_ground_state(p, alpha, mu + h).energy;
      CHECK(e0 - 2.0 * e1 + e2 <= 1e-8);
    }
  }
}

}  // TEST_SUITE
