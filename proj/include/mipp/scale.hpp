#pragma once

#include "mipp/grid_ops.hpp"
#include "mipp/risk_model.hpp"

#include <Eigen/Core>

namespace mipp {

/// W^(q) sampled on a uniform grid.
struct ScaleTable {
  Grid grid;
  double q = 0.0;
  Eigen::VectorXd values;
  /// Series terms summed, counting the n = 0 term.
  int terms_used = 0;
  /// Factorial bound on the omitted terms, sup over the grid.
  double series_tail_bound = 0.0;

  /// Linear interpolation; x must lie on [0, x_max].
  double at(double x) const { return interpolate(values, grid.h, x); }
};

/// G (claim-law Bessel kernel) and the signed series kernel built from it.
struct KernelTable {
  Grid grid;
  Eigen::VectorXd g_values;
  Eigen::VectorXd digamma_values;
};

/// exp(-decay x) sqrt(k/x) I_1(2 sqrt(k x)) on the grid; equals k at x = 0.
/// This is the inverse Laplace transform of exp(k / (decay + theta)) - 1
/// when k = lambda alpha delta and decay = delta.
Eigen::VectorXd bessel_kernel(double k, double decay, const Grid& grid);

KernelTable kernel_tables(const RiskModel& model, double q, const Grid& grid);

/// W^(q) = (1/c) pi * sum_n F^{*n} * Erlang(n+1, 2c/sigma^2) for sigma > 0,
/// and (1/c) pi * sum_n F^{*n} for sigma = 0. Terms are added until the
/// newest one drops below tol in sup norm (after the 1/c factor).
ScaleTable scale_function(const RiskModel& model, double q, const Grid& grid, double tol = 1e-8,
                          int max_terms = 5000);

/// psi'(0+) W(x), clamped to [0, 1]. std::domain_error when the net-profit
/// condition fails (survival is then 0 for every x).
double survival_probability(const RiskModel& model, const ScaleTable& w0, double x);
double survival_probability(const RiskModel& model, double x, const Grid& grid,
                            double tol = 1e-8);
double ruin_probability(const RiskModel& model, const ScaleTable& w0, double x);

/// E_x[exp(-q tau_a^+); tau_a^+ < tau_0^-] = W(x) / W(a).
double two_sided_exit(const ScaleTable& w, double x, double a);
double two_sided_exit(const RiskModel& model, double q, double x, double a, const Grid& grid,
                      double tol = 1e-8);

/// Relative error of the tabulated transform against 1 / (psi(theta) - q).
/// The part beyond x_max is estimated from the table's growth at rate Phi(q).
double laplace_identity_residual(const RiskModel& model, const ScaleTable& w, double theta);
double laplace_identity_residual(const RiskModel& model, double q, double theta,
                                 const Grid& grid, double tol = 1e-8);

/// Smallest level B (on a 0.01 grid) with analytic ruin probability from B
/// at most barrier_eps / 2.
double survival_barrier(const RiskModel& model, double barrier_eps);

}  // namespace mipp
