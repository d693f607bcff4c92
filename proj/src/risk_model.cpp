#include "mipp/risk_model.hpp"

#include <cmath>
#include <stdexcept>

namespace mipp {

namespace {

// sum_j alpha_j delta_j / (delta_j + theta)
double mixture_transform(const RiskModel& model, double theta) {
  double s = 0.0;
  for (const auto& comp : model.claims) s += comp.weight * comp.rate / (comp.rate + theta);
  return s;
}

double mixture_transform_derivative(const RiskModel& model, double theta) {
  double s = 0.0;
  for (const auto& comp : model.claims) {
    const double d = comp.rate + theta;
    s -= comp.weight * comp.rate / (d * d);
  }
  return s;
}

}  // namespace

RiskModel RiskModel::single_exponential(double c, double sigma, double lambda, double delta) {
  RiskModel m;
  m.c = c;
  m.sigma = sigma;
  m.lambda = lambda;
  m.claims = {{1.0, delta}};
  return m;
}

void RiskModel::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("premium rate c must be > 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::domain_error("sigma must be >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::domain_error("lambda must be > 0");
  if (claims.empty()) throw std::domain_error("claim mixture is empty");
  double total = 0.0;
  for (const auto& comp : claims) {
    if (!(comp.weight > 0.0)) throw std::domain_error("mixture weights must be positive");
    if (!(comp.rate > 0.0) || !std::isfinite(comp.rate)) {
      throw std::domain_error("claim rates must be positive");
    }
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::domain_error("mixture weights must sum to 1");
}

double RiskModel::mean_claim() const {
  double s = 0.0;
  for (const auto& comp : claims) s += comp.weight / comp.rate;
  return s;
}

double RiskModel::net_drift() const { return c - lambda * lambda * mean_claim(); }

double psi_R(const RiskModel& model, double theta) {
  if (!(theta >= 0.0)) throw std::domain_error("psi_R: theta must be >= 0");
  const double lam = model.lambda;
  // lambda (exp(-lambda + lambda M(theta)) - 1), with M(0) = 1
  const double jump = lam * std::expm1(lam * (mixture_transform(model, theta) - 1.0));
  return model.c * theta + jump + 0.5 * model.sigma * model.sigma * theta * theta;
}

double psi_R_derivative(const RiskModel& model, double theta) {
  if (!(theta >= 0.0)) throw std::domain_error("psi_R_derivative: theta must be >= 0");
  const double lam = model.lambda;
  const double e = std::exp(lam * (mixture_transform(model, theta) - 1.0));
  return model.c + model.sigma * model.sigma * theta +
         lam * lam * e * mixture_transform_derivative(model, theta);
}

double phi_q(const RiskModel& model, double q) {
  model.validate();
  if (!(q >= 0.0) || !std::isfinite(q)) throw std::domain_error("phi_q: q must be >= 0");

  double lo = 0.0;
  if (q == 0.0) {
    if (psi_R_derivative(model, 0.0) >= 0.0) return 0.0;
    // psi dips below zero first; start the bracket at its minimiser.
    double a = 0.0, b = 1.0;
    while (psi_R_derivative(model, b) < 0.0) b *= 2.0;
    for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, b); ++i) {
      const double mid = 0.5 * (a + b);
      (psi_R_derivative(model, mid) < 0.0 ? a : b) = mid;
    }
    lo = b;
  }
  double hi = std::max(1.0, 2.0 * lo);
  while (psi_R(model, hi) <= q) hi *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi_R(model, mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double adjustment_coefficient(const RiskModel& model) {
  model.validate();
  if (!model.net_profit_holds()) {
    throw std::domain_error("adjustment_coefficient: net-profit condition violated (c delta <= lambda^2)");
  }
  double min_rate = model.claims.front().rate;
  for (const auto& comp : model.claims) min_rate = std::min(min_rate, comp.rate);
  // psi(-r) is convex, negative just right of 0 and blows up at min_rate.
  const auto psi_neg = [&](double r) {
    const double lam = model.lambda;
    return -model.c * r + 0.5 * model.sigma * model.sigma * r * r +
           lam * std::expm1(lam * (mixture_transform(model, -r) - 1.0));
  };
  double lo = 0.0, hi = min_rate;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi_neg(mid) < 0.0 ? lo : hi) = mid;
  }
  return lo;
}

double expected_drift(const RiskModel& model) {
  model.validate();
  if (!model.is_single_exponential()) {
    throw std::domain_error("expected_drift is stated for single exponential claims only");
  }
  return model.net_drift();
}

double expected_drift_printed(const RiskModel& model) {
  model.validate();
  if (!model.is_single_exponential()) {
    throw std::domain_error("expected_drift_printed is stated for single exponential claims only");
  }
  const double lam = model.lambda;
  const double delta = model.claims.front().rate;
  return model.c - std::exp(-lam + lam * std::exp(-lam + lam / delta));
}

}  // namespace mipp
