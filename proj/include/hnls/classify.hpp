#pragma once

// Existence thresholds and the decision procedure that labels a parameter
// point as having a ground state, having none, or undecided.

#include "hnls/minimizer.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hnls {

/// (6p - 4) / (p + 2): the planar power at which the free planar and soliton
/// energies scale alike in the mass.
double r_star(double p);
bool at_r_star(double p, double r);  // relative window 1e-6

/// Mass at which the free planar and soliton levels coincide.
double mu_threshold(double p, double r);
double mu_threshold(double p, double r, double tau);
/// Exponent of tau_r / theta_p in mu_threshold.
double mu_threshold_exponent(double p, double r);

struct RhoStar {
  double value = 0.0;
  double error = 0.0;       // from a half-resolution re-solve, via dE/drho = q^2 / 2
  double residual = 0.0;    // E_{rho*}(mu) - soliton level
  double q = 0.0;           // charge of the planar ground state at rho*
  int evaluations = 0;
};

class NoRhoStar : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// rho at which the planar ground-state level equals the soliton level.
RhoStar rho_star(double p, double r, double mu, const RadialGrid& grid = {});

/// beta^2 / (alpha - alpha_p(mu)); +inf when alpha < alpha_p(mu).
double k_star(const Params& prm);

struct ClassifyBudget {
  Grids grids{};
  SolverOptions solver{};
  bool run_solver = true;
};

struct ThresholdReport {
  double theta_p = 0.0;
  double tau_r = 0.0;
  double tau_r_error = 0.0;
  double r_star = 0.0;
  std::optional<double> mu_threshold;
  double alpha_p = 0.0;
  bool alpha_p_exact = true;
  std::optional<double> rho_star;
  double rho_star_error = 0.0;
  double k_star = std::numeric_limits<double>::infinity();
  double e_lin = 0.0;
  double soliton_level = 0.0;
  double free_plane_level = 0.0;  // -tau_r mu^{2/(4-r)}
};

ThresholdReport thresholds(const Params& prm, const ClassifyBudget& budget = {});

enum class Label { Exists, NotExists, Unknown };
std::string to_string(Label l);

struct Classification {
  Label label = Label::Unknown;
  std::string rule;                        // id of the deciding rule, e.g. "R2"
  std::vector<std::string> justification;  // one entry per rule evaluated
  bool conflict = false;                   // an existence and a nonexistence rule both fired
  std::optional<double> energy;            // solver energy when the solver ran
  std::optional<MinimizerStatus> solver_status;
  ThresholdReport thresholds;
};

Classification classify(const Params& prm, const ClassifyBudget& budget = {});

struct SweepSpec {
  std::vector<double> alpha{0.0}, rho{0.0}, beta{0.0}, p{4.0}, r{3.0}, mu{1.0};
  std::size_t size() const;
  Params point(std::size_t k) const;  // mu varies fastest, then rho, beta, alpha, r, p
};

struct SweepRow {
  Params params;
  Classification result;
  std::string error;  // non-empty when the point failed
};

std::vector<SweepRow> phase_diagram(const SweepSpec& sweep, const ClassifyBudget& budget = {}, int jobs = 1);

}  // namespace hnls
