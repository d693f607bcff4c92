#include "mipp/scale.hpp"

#include "mipp/bessel.hpp"
#include "mipp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mipp {

namespace {

// sum_{n > last} (kx)^n / n!
double factorial_tail(double kx, int last) {
  if (kx <= 0.0) return 0.0;
  const double log_kx = std::log(kx);
  double bound = 0.0;
  for (int n = last + 1; n < last + 100000; ++n) {
    const double term = std::exp(n * log_kx - std::lgamma(n + 1.0));
    bound += term;
    if (n > kx && term <= 1e-18 * bound) break;
  }
  return bound;
}

void require_net_profit(const RiskModel& model) {
  if (!model.net_profit_holds()) {
    throw std::domain_error(
        "net-profit condition violated (c <= lambda^2 E[claim], i.e. c delta <= lambda^2): "
        "survival probability is 0 for every initial capital");
  }
}

}  // namespace

Eigen::VectorXd bessel_kernel(double k, double decay, const Grid& grid) {
  grid.validate();
  Eigen::VectorXd out(grid.m);
  out[0] = k;
  for (Eigen::Index i = 1; i < grid.m; ++i) {
    const double x = grid.x(i);
    const double z = 2.0 * std::sqrt(k * x);
    // sqrt(k/x) = 2k/z, so G = k e^{-decay x} 2 I_1(z) / z
    out[i] = 2.0 * k / z * std::exp(z - decay * x) * bessel_i1_scaled(z);
  }
  return out;
}

KernelTable kernel_tables(const RiskModel& model, double q, const Grid& grid) {
  model.validate();
  grid.validate();
  if (!(q >= 0.0)) throw std::domain_error("kernel_tables: q must be >= 0");
  const double lam = model.lambda;

  // Product of (1 + G_i) minus one, built one component at a time.
  Eigen::VectorXd g = Eigen::VectorXd::Zero(grid.m);
  bool first = true;
  for (const auto& comp : model.claims) {
    const Eigen::VectorXd gi = bessel_kernel(lam * comp.weight * comp.rate, comp.rate, grid);
    if (first) {
      g = gi;
      first = false;
    } else {
      g += gi + convolve_trapezoid(g, gi, grid.h);
    }
  }

  const double a = (-lam * std::expm1(-lam) + q) / model.c;
  const double b = lam * std::exp(-lam) / model.c;
  KernelTable out;
  out.grid = grid;
  out.digamma_values = (a - b * running_integral(g, grid.h).array()).matrix();
  out.g_values = std::move(g);
  return out;
}

ScaleTable scale_function(const RiskModel& model, double q, const Grid& grid, double tol,
                          int max_terms) {
  model.validate();
  grid.validate();
  if (!(q >= 0.0)) throw std::domain_error("scale_function: q must be >= 0");
  if (!(tol > 0.0)) throw std::domain_error("scale_function: tol must be > 0");

  const KernelTable kernels = kernel_tables(model, q, grid);
  const Eigen::VectorXd& digamma = kernels.digamma_values;
  const double h = grid.h;
  const bool diffusive = model.sigma > 0.0;
  const double erlang_rate = diffusive ? 2.0 * model.c / (model.sigma * model.sigma) : 0.0;

  // term_0 = pi * F_1 (or pi when sigma = 0); term_n = digamma * F_1 * term_{n-1}.
  Eigen::VectorXd term = Eigen::VectorXd::Ones(grid.m);
  if (diffusive) term = convolve_exponential(term, erlang_rate, h);
  Eigen::VectorXd sum = term;
  int terms = 1;
  for (;;) {
    if (terms >= max_terms) {
      throw TruncationError("scale_function: series did not converge within max_terms",
                            term.cwiseAbs().maxCoeff() / model.c);
    }
    term = diffusive ? convolve_trapezoid(digamma, convolve_exponential(term, erlang_rate, h), h)
                     : convolve_trapezoid(digamma, term, h);
    sum += term;
    ++terms;
    if (term.cwiseAbs().maxCoeff() < tol * model.c) break;
  }

  ScaleTable out;
  out.grid = grid;
  out.q = q;
  out.values = sum / model.c;
  out.terms_used = terms;
  out.series_tail_bound =
      factorial_tail(digamma.cwiseAbs().maxCoeff() * grid.x_max(), terms - 1) / model.c;
  return out;
}

double survival_probability(const RiskModel& model, const ScaleTable& w0, double x) {
  model.validate();
  require_net_profit(model);
  if (w0.q != 0.0) throw std::domain_error("survival_probability needs the q = 0 scale function");
  if (!(x >= 0.0)) throw std::domain_error("survival_probability: x must be >= 0");
  return std::clamp(model.net_drift() * w0.at(x), 0.0, 1.0);
}

double survival_probability(const RiskModel& model, double x, const Grid& grid, double tol) {
  model.validate();
  require_net_profit(model);
  return survival_probability(model, scale_function(model, 0.0, grid, tol), x);
}

double ruin_probability(const RiskModel& model, const ScaleTable& w0, double x) {
  return 1.0 - survival_probability(model, w0, x);
}

double two_sided_exit(const ScaleTable& w, double x, double a) {
  if (!(x >= 0.0) || !(x <= a)) throw std::domain_error("two_sided_exit: need 0 <= x <= a");
  if (a > w.grid.x_max() + 1e-12) throw std::domain_error("two_sided_exit: a beyond the grid");
  const double wa = w.at(a);
  if (!(wa > 1e-300)) throw std::domain_error("two_sided_exit: W(a) is numerically zero");
  return w.at(x) / wa;
}

double two_sided_exit(const RiskModel& model, double q, double x, double a, const Grid& grid,
                      double tol) {
  return two_sided_exit(scale_function(model, q, grid, tol), x, a);
}

double laplace_identity_residual(const RiskModel& model, const ScaleTable& w, double theta) {
  const double phi = phi_q(model, w.q);
  if (!(theta > phi)) throw std::domain_error("laplace_identity_residual: need theta > Phi(q)");
  const Eigen::VectorXd x = w.grid.nodes();
  const Eigen::VectorXd weighted = ((-theta * x).array().exp() * w.values.array()).matrix();
  double integral = trapezoid(weighted, w.grid.h);

  // W(x) <= C e^{Phi x} beyond the grid, C from the last tenth of the table.
  const Eigen::Index m = w.grid.m;
  const Eigen::Index from = m - std::max<Eigen::Index>(1, m / 10);
  double growth = 0.0;
  for (Eigen::Index k = from; k < m; ++k) {
    growth = std::max(growth, w.values[k] * std::exp(-phi * x[k]));
  }
  const double x_max = w.grid.x_max();
  integral += growth * std::exp(-(theta - phi) * x_max) / (theta - phi);

  const double denom = psi_R(model, theta) - w.q;
  return std::abs(integral * denom - 1.0);
}

double laplace_identity_residual(const RiskModel& model, double q, double theta,
                                 const Grid& grid, double tol) {
  return laplace_identity_residual(model, scale_function(model, q, grid, tol), theta);
}

double survival_barrier(const RiskModel& model, double barrier_eps) {
  if (!(barrier_eps > 0.0 && barrier_eps < 1.0)) {
    throw std::domain_error("survival_barrier: barrier_eps must lie in (0, 1)");
  }
  // Lundberg: ruin(x) <= exp(-R x), so ruin(B) <= barrier_eps exactly.
  return std::log(1.0 / barrier_eps) / adjustment_coefficient(model);
}

}  // namespace mipp
