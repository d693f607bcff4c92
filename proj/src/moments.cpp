#include "mipp/dist.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mipp {

namespace {

// |lambda - 1| below this uses the lambda = 1 limit formulas.
constexpr double kUnitBranch = 1e-8;

MomentSet unit_lambda_moments(double lambda, int n, double t) {
  const double nd = n;
  MomentSet m;
  m.mean = std::pow(lambda, n) * t;
  m.variance = nd * t;
  m.skewness = (3.0 * nd - 1.0) / (2.0 * std::sqrt(nd * t));
  m.kurtosis = (6.0 * nd * nd - 5.0 * nd + 1.0) / (2.0 * nd * t) + 3.0;
  return m;
}

}  // namespace

MomentSet moments_closed(const MippParams& params, double t) {
  params.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("moments_closed: t must be > 0");
  const double lam = params.lambda;
  const int n = params.n;
  if (std::abs(lam - 1.0) < kUnitBranch) return unit_lambda_moments(lam, n, t);

  const double ln = std::pow(lam, n);
  const double l2n = ln * ln;
  const double lam2 = lam * lam;
  const double lam3 = lam2 * lam;

  MomentSet m;
  m.mean = ln * t;
  m.variance = ln * t * (1.0 - ln) / (1.0 - lam);
  m.skewness = (ln * lam + 2.0 * ln - 2.0 * lam - 1.0) /
               ((lam2 - 1.0) * std::sqrt((ln - 1.0) / (lam - 1.0) * ln * t));
  const double num = 1.0 + 6.0 * lam + 5.0 * lam2 + 6.0 * lam3 - 6.0 * ln + 6.0 * l2n -
                     12.0 * ln * lam - 13.0 * ln * lam2 - 5.0 * ln * lam3 + 6.0 * l2n * lam +
                     5.0 * l2n * lam2 + l2n * lam3;
  m.kurtosis = num / (ln * (lam2 - 1.0) * (lam2 + lam + 1.0) * (ln - 1.0) * t) + 3.0;

  if (!std::isfinite(m.mean) || !std::isfinite(m.variance) || !std::isfinite(m.skewness) ||
      !std::isfinite(m.kurtosis)) {
    throw std::range_error("moments_closed: lambda^n too large for double precision");
  }
  return m;
}

double bell_polynomial(int m, double x) {
  if (m < 0) throw std::domain_error("bell_polynomial: m must be >= 0");
  std::vector<double> b(static_cast<std::size_t>(m) + 1);
  b[0] = 1.0;
  for (int k = 1; k <= m; ++k) {
    // B_k(x) = x sum_{j<k} C(k-1, j) B_j(x)
    double s = 0.0;
    double binom = 1.0;
    for (int j = 0; j < k; ++j) {
      s += binom * b[j];
      binom = binom * (k - 1 - j) / (j + 1);
    }
    b[k] = x * s;
  }
  return b[m];
}

double moment_bell(const MippParams& params, double t, int m, double eps) {
  params.validate();
  if (m < 0 || m > 4) throw std::domain_error("moment_bell: order must be in 0..4");
  if (!(t > 0.0)) throw std::domain_error("moment_bell: t must be > 0");
  if (params.n == 1) return bell_polynomial(m, params.lambda * t);
  const Pmf inner = pmf({params.lambda, params.n - 1}, t, eps);
  double s = 0.0;
  for (Eigen::Index k = 0; k < inner.size(); ++k) {
    s += inner.masses[k] * bell_polynomial(m, params.lambda * static_cast<double>(k));
  }
  return s;
}

std::optional<SkewKurtLimit> skew_kurt_limits(double lambda, double t) {
  if (!(t > 0.0)) throw std::domain_error("skew_kurt_limits: t must be > 0");
  if (std::isnan(lambda)) throw std::domain_error("skew_kurt_limits: lambda is NaN");
  if (lambda <= 1.0) return std::nullopt;
  const double l2 = lambda * lambda;
  SkewKurtLimit out{};
  out.skewness = (lambda + 2.0) / ((lambda + 1.0) * std::sqrt((lambda - 1.0) * t));
  out.kurtosis = (6.0 + 6.0 * lambda + 5.0 * l2 + l2 * lambda) /
                     ((l2 - 1.0) * (l2 + lambda + 1.0) * t) +
                 3.0;
  return out;
}

}  // namespace mipp
