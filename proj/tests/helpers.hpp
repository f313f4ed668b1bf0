#pragma once

// Random smooth states for property tests.

#include "hnls/core.hpp"

#include <random>

namespace testing_support {

using hnls::cplx;

/// Sum of a few decaying exponentials on the half-line and Gaussians on the
/// plane, with a random complex charge. Coarse grids keep the tests fast.
inline hnls::HybridState random_state(std::mt19937& rng, const hnls::HalfLineGrid& hg = {20.0, 801},
                                      const hnls::RadialGrid& rg = {20.0, 801, 2.0}, double lambda = 1.0,
                                      bool with_charge = true) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), rate(0.5, 2.0), width(0.7, 2.5);
  hnls::HybridState s = hnls::HybridState::zeros(hg, rg, lambda);
  for (int k = 0; k < 3; ++k) {
    const cplx a(amp(rng), amp(rng));
    const double b = rate(rng);
    for (int i = 0; i < hg.N; ++i) s.u[i] += a * std::exp(-b * hg.x(i));
  }
  s.u[hg.N - 1] = 0.0;
  for (int k = 0; k < 2; ++k) {
    const cplx c(amp(rng), amp(rng));
    const double w = width(rng);
    for (int j = 0; j < rg.M; ++j) {
      const double x = rg.r(j) / w;
      s.phi[j] += c * std::exp(-x * x);
    }
  }
  s.phi[rg.M - 1] = 0.0;
  if (with_charge) s.q = cplx(amp(rng), amp(rng));
  return s;
}

inline hnls::HybridState scaled(const hnls::HybridState& s, cplx f) {
  hnls::HybridState t = s;
  t.u *= f;
  t.phi *= f;
  t.q *= f;
  return t;
}

// s + e d, both on the same grids and lambda
inline hnls::HybridState axpy(const hnls::HybridState& s, double e, const hnls::HybridState& d) {
  hnls::HybridState t = s;
  t.u += e * d.u;
  t.phi += e * d.phi;
  t.q += e * d.q;
  return t;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
