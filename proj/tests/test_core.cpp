#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "hnls/core.hpp"

using namespace hnls;
using testing_support::rel;

TEST_SUITE("core") {

TEST_CASE("params validation rejects out-of-range values") {
  CHECK_NOTHROW(make_params(0.0, 0.0, 0.0, 4.0, 3.0, 1.0));
  CHECK_THROWS_AS(make_params(0.0, 0.0, 0.0, 6.0, 3.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_params(0.0, 0.0, 0.0, 2.0, 3.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_params(0.0, 0.0, 0.0, 4.0, 4.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_params(0.0, 0.0, -0.1, 4.0, 3.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_params(0.0, 0.0, 0.0, 4.0, 3.0, 0.0), DomainError);
}

TEST_CASE("grids") {
  const HalfLineGrid hg{2.0, 5};
  CHECK(hg.x(0) == 0.0);
  CHECK(hg.x(4) == doctest::Approx(2.0).epsilon(1e-15));
  const RadialGrid rg{3.0, 11, 2.0};
  CHECK(rg.r(0) == 0.0);
  CHECK(rg.r(10) == doctest::Approx(3.0).epsilon(1e-15));
  for (int j = 0; j + 1 < rg.M; ++j) CHECK(rg.r(j + 1) > rg.r(j));
  CHECK_THROWS_AS(validate(RadialGrid{1.0, 10, 0.5}), DomainError);
  CHECK_THROWS_AS(validate(HalfLineGrid{-1.0, 10}), DomainError);
}

TEST_CASE("K0 and K1 against the cosh integral") {
  CHECK(bessel_k0(1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-14));
  for (double x : {1e-4, 0.01, 0.3, 0.9, 1.0, 1.7, 2.5, 4.0, 8.0, 20.0, 45.0}) {
    CHECK(rel(bessel_k0(x), oracle::k0_integral(x)) < 1e-10);
    CHECK(rel(bessel_k1(x), oracle::k1_integral(x)) < 1e-10);
  }
  CHECK_THROWS_AS(bessel_k0(0.0), DomainError);
  CHECK_THROWS_AS(bessel_k0(-1.0), DomainError);
}

TEST_CASE("K0 decreasing, convex, log singular at 0") {
  double prev = bessel_k0(0.01);
  for (int k = 1; k < 400; ++k) {
    const double x = 0.01 + 0.05 * k, h = 0.01;
    const double v = bessel_k0(x);
    CHECK(v < prev);
    CHECK(bessel_k0(x - h) - 2.0 * v + bessel_k0(x + h) > 0.0);
    prev = v;
  }
  // K0(x) + log x -> log 2 - gamma
  for (double x : {1e-3, 1e-6, 1e-9, 1e-12})
    CHECK(std::abs(bessel_k0(x) + std::log(x) - (kLog2 - kEulerGamma)) < 1e-5);
}

TEST_CASE("green2d values and scaling") {
  CHECK(green2d(1.0, 1.0) == doctest::Approx(0.067004).epsilon(1e-5));
  CHECK(green2d(1.0, 1.0) == doctest::Approx(oracle::k0_integral(1.0) / (2.0 * oracle::pi)).epsilon(1e-12));
  CHECK(green2d(4.0, 0.5) == doctest::Approx(green2d(1.0, 1.0)).epsilon(1e-14));
  CHECK(green2d(100.0, 4.0) < 1e-12);
  CHECK_THROWS_AS(green2d(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(green2d(1.0, 0.0), DomainError);
}

TEST_CASE("green L2 norm") {
  CHECK(green_l2_norm(1.0) == doctest::Approx(0.28209479).epsilon(1e-8));
  CHECK(green_l2_norm(4.0) == doctest::Approx(0.14104740).epsilon(1e-7));
  CHECK_THROWS_AS(green_l2_norm(-1.0), DomainError);
  const RadialGrid rg{};
  for (double lam : {0.5, 1.0, 2.0}) {
    const VecR G = sample_green(rg, lam);
    VecR f = G.array().square();
    f[0] = 0.0;
    const double n2 = green_l2_norm(lam) * green_l2_norm(lam);
    CHECK(rel(quad_radial(f, rg), n2) < 1e-5);
  }
}

TEST_CASE("quad_radial of G^2 converges faster than second order") {
  double prev_err = 0.0;
  for (int M : {500, 1000, 2000, 4000}) {
    const RadialGrid rg{40.0, M, 2.0};
    VecR f = sample_green(rg, 1.0).array().square();
    f[0] = 0.0;
    const double err = rel(quad_radial(f, rg), 1.0 / (4.0 * kPi));
    if (prev_err > 0.0) CHECK(err < prev_err / 6.0);
    prev_err = err;
  }
}

TEST_CASE("quad_halfline") {
  {
    const HalfLineGrid g{2.0, 11};
    CHECK(quad_halfline(VecR::Ones(11), g) == doctest::Approx(2.0).epsilon(1e-14));
  }
  {
    const HalfLineGrid g{1.0, 101};
    CHECK(std::abs(quad_halfline(g.nodes(), g) - 0.5) < 1e-12);
  }
  {
    const HalfLineGrid g{40.0, 40001};
    const VecR f = (-2.0 * g.nodes().array()).exp();
    CHECK(std::abs(quad_halfline(f, g) - 0.5) < 1e-6);
  }
  CHECK_THROWS(quad_halfline(VecR::Ones(3), HalfLineGrid{1.0, 4}));
}

TEST_CASE("quad_radial") {
  {
    const RadialGrid g{1.0, 4000, 2.0};
    CHECK(std::abs(quad_radial(VecR::Ones(g.M), g) - kPi) < 1e-10);
  }
  // 2 pi int_0^1 r |log r| dr = pi / 2
  double prev = 0.0;
  for (int M : {1000, 2000, 4000}) {
    const RadialGrid g{1.0, M, 2.0};
    VecR f(M);
    f[0] = std::numeric_limits<double>::quiet_NaN();
    for (int j = 1; j < M; ++j) f[j] = std::abs(std::log(g.r(j)));
    const double v = quad_radial(f, g);
    CHECK(std::isfinite(v));
    CHECK(rel(v, kPi / 2.0) < 1e-4);
    if (prev > 0.0) CHECK(rel(v, prev) < 1e-4);
    prev = v;
  }
  CHECK_THROWS(quad_radial(VecR::Ones(3), RadialGrid{1.0, 4, 2.0}));
}

TEST_CASE("change of decomposition") {
  std::mt19937 rng(7);
  SUBCASE("q = 0 leaves phi unchanged") {
    HybridState s = testing_support::random_state(rng, {20.0, 201}, {20.0, 201, 2.0}, 1.0, false);
    const HybridState t = change_of_decomposition(s, 3.7);
    CHECK((t.phi - s.phi).norm() == 0.0);
    CHECK(t.lambda_ref == 3.7);
  }
  SUBCASE("round trip and pointwise field") {
    for (int trial = 0; trial < 10; ++trial) {
      HybridState s = testing_support::random_state(rng);
      const HybridState t = change_of_decomposition(s, 0.37);
      const HybridState back = change_of_decomposition(t, s.lambda_ref);
      CHECK((back.phi - s.phi).cwiseAbs().maxCoeff() < 1e-12);
      // sampled at nodes; between nodes the regular part is interpolated
      std::uniform_int_distribution<int> node(1, s.rgrid.M - 2);
      for (int k = 0; k < 10; ++k) {
        const double x = s.rgrid.r(node(rng));
        CHECK(std::abs(planar_field_at(s, x) - planar_field_at(t, x)) < 1e-12);
      }
      const VecC vs = planar_field(s), vt = planar_field(t);
      for (int j = 1; j < s.rgrid.M; ++j) CHECK(std::abs(vs[j] - vt[j]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(change_of_decomposition(HybridState::zeros({}, {}), 0.0), DomainError);
}

TEST_CASE("charge coefficient") {
  CHECK(charge_coefficient(0.0, 1.0) == doctest::Approx((kEulerGamma - kLog2) / (2.0 * kPi)).epsilon(1e-15));
  CHECK(charge_coefficient(0.3, 4.0) - charge_coefficient(0.3, 1.0) ==
        doctest::Approx(std::log(2.0) / (2.0 * kPi)).epsilon(1e-13));
}

}  // TEST_SUITE
