#include "mipp/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mipp {

Grid Grid::covering(double h, double x_max) {
  if (!(h > 0.0) || !(x_max > 0.0)) throw std::domain_error("grid needs h > 0 and x_max > 0");
  Grid g;
  g.h = h;
  g.m = static_cast<Eigen::Index>(std::ceil(x_max / h - 1e-9)) + 1;
  return g;
}

void Grid::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::domain_error("grid step must be > 0");
  if (m < 2) throw std::domain_error("grid needs at least two points");
}

Eigen::VectorXd Grid::nodes() const {
  return Eigen::VectorXd::LinSpaced(m, 0.0, x_max());
}

Eigen::VectorXd convolve_trapezoid(const GridVector& f, const GridVector& g, double h) {
  const Eigen::Index m = f.size();
  if (g.size() != m) throw std::invalid_argument("convolve_trapezoid: size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd f_rev = f.reverse();
  for (Eigen::Index k = 1; k < m; ++k) {
    // sum_{j=0}^{k} f(k - j) g(j)
    const double s = f_rev.segment(m - 1 - k, k + 1).dot(g.head(k + 1));
    out[k] = h * (s - 0.5 * (f[k] * g[0] + f[0] * g[k]));
  }
  return out;
}

Eigen::VectorXd convolve_exponential(const GridVector& f, double rate, double h) {
  const Eigen::Index m = f.size();
  const double x = rate * h;
  const double decay = std::exp(-x);
  const double a = -std::expm1(-x);  // int_0^h r e^{-rs} ds
  // (1/h) int_0^h r e^{-rs} s ds
  const double b = x < 1e-3 ? x * (0.5 - x * (1.0 / 3.0 - x * (0.125 - x / 30.0)))
                            : (a - x * decay) / x;
  Eigen::VectorXd out(m);
  out[0] = 0.0;
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    out[k + 1] = decay * out[k] + a * f[k + 1] - b * (f[k + 1] - f[k]);
  }
  return out;
}

Eigen::VectorXd running_integral(const GridVector& f, double h) {
  const Eigen::Index m = f.size();
  Eigen::VectorXd out(m);
  out[0] = 0.0;
  for (Eigen::Index k = 1; k < m; ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
  return out;
}

double trapezoid(const GridVector& f, double h) {
  const Eigen::Index m = f.size();
  if (m < 2) return 0.0;
  return h * (f.sum() - 0.5 * (f[0] + f[m - 1]));
}

double interpolate(const GridVector& values, double h, double x) {
  const Eigen::Index m = values.size();
  const double pos = x / h;
  if (!(pos >= -1e-9) || pos > static_cast<double>(m - 1) + 1e-9) {
    throw std::domain_error("interpolate: x outside the grid");
  }
  const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::max(0.0, pos)), m - 2);
  const double w = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

}  // namespace mipp
