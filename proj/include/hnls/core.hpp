#pragma once

// Grids, quadrature, the Macdonald functions and the charge decomposition
// v = phi_lambda + q G_lambda of planar fields.

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>

namespace hnls {

using cplx = std::complex<double>;
using VecR = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.5772156649015329;
inline constexpr double kLog2 = 0.69314718055994530942;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Physical parameters of the hybrid problem.
struct Params {
  double alpha = 0.0;  // delta strength on the half-line
  double rho = 0.0;    // contact strength on the plane
  double beta = 0.0;   // junction coupling, >= 0
  double p = 4.0;      // half-line power, in (2, 6)
  double r = 3.0;      // planar power, in (2, 4)
  double mu = 1.0;     // total mass, > 0
};

/// Throws DomainError naming the offending field.
void validate(const Params& prm);
Params make_params(double alpha, double rho, double beta, double p, double r, double mu);

struct HalfLineGrid {
  double L = 40.0;
  int N = 4000;

  double h() const { return L / (N - 1); }
  double x(int i) const { return i * h(); }
  VecR nodes() const;
};

/// Graded radial grid r_j = R (j/(M-1))^g.
struct RadialGrid {
  double R = 40.0;
  int M = 4000;
  double g = 2.0;

  double r(int j) const;
  VecR nodes() const;
};

void validate(const HalfLineGrid& grid);
void validate(const RadialGrid& grid);

/// Discretized element of the energy domain. u lives on the half-line grid,
/// phi is the regular planar part at lambda_ref on the radial grid.
struct HybridState {
  HalfLineGrid hgrid;
  RadialGrid rgrid;
  VecC u;
  VecC phi;
  cplx q{0.0, 0.0};
  double lambda_ref = 1.0;

  static HybridState zeros(const HalfLineGrid& hg, const RadialGrid& rg, double lambda = 1.0);
};

double bessel_k0(double x);
double bessel_k1(double x);

/// G_lambda(radius) = K0(sqrt(lambda) radius) / (2 pi).
double green2d(double lambda, double radius);
/// ||G_lambda||_{L^2(R^2)} = 1 / (2 sqrt(pi lambda)).
double green_l2_norm(double lambda);

/// rho + (gamma - log 2 + log sqrt(lambda)) / (2 pi), the coefficient of |q|^2
/// in the planar quadratic form.
double charge_coefficient(double rho, double lambda);

/// Limit of G_lambda(r) - G_nu(r) as r -> 0.
double green_difference_at_origin(double lambda, double nu);

/// Trapezoid weights on the half-line grid.
VecR halfline_weights(const HalfLineGrid& grid);
/// Weights for 2 pi int_0^R f(r) r dr. Cell [0, r_1] integrates the local model
/// c0 + c1 log r through nodes 1 and 2, so node 0 carries zero weight; the other
/// cells are exact for piecewise linear f.
VecR radial_weights(const RadialGrid& grid);

double quad_halfline(const Eigen::Ref<const VecR>& f, const HalfLineGrid& grid);
double quad_radial(const Eigen::Ref<const VecR>& f, const RadialGrid& grid);

/// G_lambda at the radial nodes; node 0 is set to NaN (never used).
VecR sample_green(const RadialGrid& grid, double lambda);

/// Precomputed weights and Green samples for one (grids, lambda) triple.
/// Four-node difference for the planar derivative at the midpoint t_{m+1/2},
/// ghosts folded into interior nodes.
struct RadialStencil {
  int idx[4];
  double coef[4];
};
RadialStencil radial_stencil(const RadialGrid& grid, int m);

struct Discretization {
  HalfLineGrid hgrid;
  RadialGrid rgrid;
  double lambda = 1.0;
  VecR w;   // half-line trapezoid weights
  VecR W;   // radial weights, W[0] = 0
  VecR G;   // G_lambda at radial nodes, G[0] unused
  VecR kr;  // second-order stiffness per cell, pi (r_j + r_{j+1}) / (r_{j+1} - r_j); preconditioning only
  VecR kc;  // fourth-order stiffness: kinetic = sum_m kc[m] |stencil_m . phi|^2

  /// Memoized; safe to call from several threads.
  static std::shared_ptr<const Discretization> get(const HalfLineGrid& hg, const RadialGrid& rg,
                                                   double lambda);
  static std::shared_ptr<const Discretization> of(const HybridState& s) {
    return get(s.hgrid, s.rgrid, s.lambda_ref);
  }
};

/// Same physical field, regular part re-expressed at new_lambda.
HybridState change_of_decomposition(const HybridState& s, double new_lambda);

/// v at the radial nodes. Entry 0 is NaN when q != 0.
VecC planar_field(const HybridState& s);
/// v at an arbitrary radius > 0 (linear interpolation of phi).
cplx planar_field_at(const HybridState& s, double radius);

}  // namespace hnls
