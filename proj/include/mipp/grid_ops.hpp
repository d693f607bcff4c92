#pragma once

#include <Eigen/Core>

namespace mipp {

/// Uniform grid x_k = k h, k = 0..m-1.
struct Grid {
  double h = 1e-3;
  Eigen::Index m = 2;

  static Grid covering(double h, double x_max);

  void validate() const;
  double x(Eigen::Index k) const { return static_cast<double>(k) * h; }
  double x_max() const { return static_cast<double>(m - 1) * h; }
  Eigen::VectorXd nodes() const;
};

using GridVector = Eigen::Ref<const Eigen::VectorXd>;

/// (f * g)(x_k) = int_0^{x_k} f(x_k - s) g(s) ds by the trapezoid rule.
Eigen::VectorXd convolve_trapezoid(const GridVector& f, const GridVector& g, double h);

/// Convolution with the Exp(rate) density, exact for the piecewise-linear
/// interpolant of f. Stable for any rate * h.
Eigen::VectorXd convolve_exponential(const GridVector& f, double rate, double h);

/// Running trapezoid integral, out[k] = int_0^{x_k} f.
Eigen::VectorXd running_integral(const GridVector& f, double h);

/// Trapezoid integral over the whole grid.
double trapezoid(const GridVector& f, double h);

/// Piecewise-linear interpolation of grid values at x in [0, x_max].
double interpolate(const GridVector& values, double h, double x);

}  // namespace mipp
