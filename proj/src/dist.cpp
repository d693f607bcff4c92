#include "mipp/dist.hpp"

#include "mipp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mipp {

namespace {

// Mass below which a term past every component mean can no longer move a
// long double accumulator.
constexpr double kNegligible = 1e-19;

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in (0, 1)");
}

double log_sum_exp(const std::vector<double>& logs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : logs) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - hi);
  return hi + std::log(s);
}

Pmf finish(std::vector<double>& masses, long double cum, double t) {
  Pmf out;
  out.t = t;
  out.masses = Eigen::Map<Eigen::VectorXd>(masses.data(), static_cast<Eigen::Index>(masses.size()));
  out.tail_bound = std::max(0.0, static_cast<double>(1.0L - cum));
  return out;
}

Pmf poisson_pmf(double mean, double t, double eps, std::size_t max_support) {
  std::vector<double> masses;
  long double cum = 0.0L;
  if (mean == 0.0) {
    masses.push_back(1.0);
    return finish(masses, 1.0L, t);
  }
  const double log_mean = std::log(mean);
  for (std::size_t k = 0;; ++k) {
    if (k >= max_support) {
      throw TruncationError("Poisson support exceeded max_support",
                            static_cast<double>(1.0L - cum));
    }
    const double kd = static_cast<double>(k);
    const double mass = std::exp(kd * log_mean - mean - std::lgamma(kd + 1.0));
    masses.push_back(mass);
    cum += mass;
    if (1.0L - cum <= static_cast<long double>(eps)) break;
    if (kd > mean && mass < kNegligible) {
      const double achieved = static_cast<double>(1.0L - cum);
      if (achieved > eps) throw TruncationError("Poisson tail tolerance unattainable", achieved);
      break;
    }
  }
  return finish(masses, cum, t);
}

Pmf level_pmf(double lambda, int n, double t, double eps, std::size_t max_support) {
  if (n == 1) return poisson_pmf(lambda * t, t, eps, max_support);

  const Pmf inner = level_pmf(lambda, n - 1, t, 0.5 * eps, max_support);
  const Eigen::Index inner_size = inner.size();

  long double inner_total = 0.0L;
  std::vector<double> log_w;
  std::vector<double> log_rate;  // log(lambda j)
  std::vector<double> rate;      // lambda j
  double max_rate = 0.0;
  double log_w0 = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < inner_size; ++j) {
    inner_total += inner.masses[j];
    if (inner.masses[j] <= 0.0) continue;
    if (j == 0) {
      log_w0 = std::log(inner.masses[0]);
      continue;
    }
    const double r = lambda * static_cast<double>(j);
    log_w.push_back(std::log(inner.masses[j]));
    rate.push_back(r);
    log_rate.push_back(std::log(r));
    max_rate = std::max(max_rate, r);
  }

  std::vector<double> masses;
  std::vector<double> terms(log_w.size() + 1);
  long double cum = 0.0L;
  const long double target = inner_total - 0.5L * static_cast<long double>(eps);
  for (std::size_t k = 0;; ++k) {
    if (k >= max_support) {
      throw TruncationError("pmf support exceeded max_support", static_cast<double>(1.0L - cum));
    }
    const double kd = static_cast<double>(k);
    const double log_kfact = std::lgamma(kd + 1.0);
    terms.resize(log_w.size() + (k == 0 ? 1 : 0));
    for (std::size_t i = 0; i < log_w.size(); ++i) {
      terms[i] = kd * log_rate[i] - rate[i] - log_kfact + log_w[i];
    }
    // j = 0 contributes only to k = 0 (0^0 = 1).
    if (k == 0) terms[log_w.size()] = log_w0;
    const double mass = std::min(1.0, std::exp(log_sum_exp(terms)));
    masses.push_back(mass);
    cum += mass;
    if (cum >= target) break;
    if (kd > max_rate && mass < kNegligible) {
      const double achieved = static_cast<double>(1.0L - cum);
      if (achieved > eps) throw TruncationError("pmf tail tolerance unattainable", achieved);
      break;
    }
  }
  return finish(masses, cum, t);
}

}  // namespace

void MippParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("lambda must be positive and finite");
  }
  if (n < 1) throw std::domain_error("iteration depth n must be >= 1");
}

double LevyMeasure::jump_rate() const {
  double s = 0.0;
  for (const auto& m : masses) {
    if (m.is_jump) s += m.mass;
  }
  return s;
}

double char_exponent(const MippParams& params, double theta) {
  params.validate();
  if (std::isnan(theta)) throw std::domain_error("char_exponent: theta is NaN");
  double ell = params.lambda * std::expm1(theta);
  for (int i = 2; i <= params.n; ++i) {
    if (!std::isfinite(ell)) break;
    ell = params.lambda * std::expm1(ell);
  }
  if (!std::isfinite(ell)) {
    throw std::range_error("char_exponent overflow at depth n = " + std::to_string(params.n));
  }
  return ell;
}

double tilted_char_exponent(const MippParams& params, double theta, double z) {
  return char_exponent(params, z + theta) - char_exponent(params, theta);
}

Pmf pmf(const MippParams& params, double t, double eps, std::size_t max_support) {
  params.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("pmf: t must be >= 0");
  require_eps(eps);
  return level_pmf(params.lambda, params.n, t, eps, max_support);
}

Eigen::VectorXd q_sequence(double lambda, int m) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("q_sequence: lambda must be positive and finite");
  }
  if (m < 1) throw std::domain_error("q_sequence: m must be >= 1");
  Eigen::VectorXd q(m);
  q[0] = -std::expm1(-lambda);
  for (int j = 1; j < m; ++j) q[j] = -std::expm1(-lambda * q[j - 1]);
  return q;
}

double sojourn_rate(const MippParams& params) {
  params.validate();
  if (params.n == 1) return params.lambda;
  return params.lambda * q_sequence(params.lambda, params.n - 1)[params.n - 2];
}

Pmf first_jump_pmf(const MippParams& params, double eps) {
  params.validate();
  require_eps(eps);
  if (params.n < 2) throw std::domain_error("first_jump_pmf requires n >= 2");
  const double q = sojourn_rate(params) / params.lambda;
  Pmf inner = pmf({params.lambda, params.n - 1}, 1.0, eps * q);
  Pmf out;
  out.t = 1.0;
  out.masses = inner.masses / q;
  out.masses[0] = 0.0;
  out.tail_bound = inner.tail_bound / q;
  return out;
}

double joint_mgf_first_jump(const MippParams& params, double s1, double s2) {
  params.validate();
  if (params.n < 2) throw std::domain_error("joint_mgf_first_jump requires n >= 2");
  if (std::isnan(s1) || std::isnan(s2)) throw std::domain_error("joint_mgf_first_jump: NaN argument");
  const double rate = sojourn_rate(params);
  if (!(s1 < rate)) {
    throw std::domain_error("joint_mgf_first_jump: s1 must be below the sojourn rate");
  }
  return 1.0 + (s1 + char_exponent(params, s2)) / (rate - s1);
}

double joint_transform_printed(const MippParams& params, double s1, double s2) {
  const double rate = sojourn_rate(params);
  return 1.0 - (s1 + char_exponent(params, s2)) / (rate + s1);
}

LevyMeasure levy_measure(const MippParams& params, double theta, int kmax, double eps) {
  params.validate();
  require_eps(eps);
  if (params.n < 2) throw std::domain_error("levy_measure requires n >= 2");
  if (kmax < 0) throw std::domain_error("levy_measure: kmax must be >= 0");
  if (std::isnan(theta)) throw std::domain_error("levy_measure: theta is NaN");

  const MippParams inner_params{params.lambda, params.n - 1};
  const Pmf inner = pmf(inner_params, 1.0, std::min(1e-13, 0.01 * eps));
  LevyMeasure out;
  out.masses.reserve(static_cast<std::size_t>(kmax) + 1);
  long double listed = 0.0L;
  for (int k = 0; k <= kmax; ++k) {
    const double mass = params.lambda * std::exp(k * theta) * inner[k];
    out.masses.push_back({k, mass, k > 0});
    listed += mass;
  }
  // Total tilted mass is lambda E exp(theta V_1^(n-1)).
  const double total = params.lambda * std::exp(char_exponent(inner_params, theta));
  out.tail = std::max(0.0, static_cast<double>(static_cast<long double>(total) - listed));
  if (out.tail > eps) {
    throw TruncationError("levy_measure: mass beyond kmax is not negligible", out.tail);
  }
  return out;
}

double governing_rhs(const MippParams& params, double t, int k, double eps) {
  params.validate();
  if (params.n < 2) throw std::domain_error("governing_rhs requires n >= 2");
  if (k < 0) throw std::domain_error("governing_rhs: k must be >= 0");
  const Pmf p = pmf(params, t, eps);
  const Pmf nu = pmf({params.lambda, params.n - 1}, 1.0, eps);
  double conv = 0.0;
  for (int j = 1; j <= k; ++j) conv += params.lambda * nu[j] * p[k - j];
  return -sojourn_rate(params) * p[k] + conv;
}

double governing_residual(const MippParams& params, double t, int k, double dt, double eps) {
  if (!(dt > 0.0) || !(t > dt)) throw std::domain_error("governing_residual: need 0 < dt < t");
  const Pmf up = pmf(params, t + dt, eps);
  const Pmf down = pmf(params, t - dt, eps);
  const double derivative = (up[k] - down[k]) / (2.0 * dt);
  return std::abs(derivative - governing_rhs(params, t, k, eps));
}

}  // namespace mipp
