#pragma once

#include <vector>

namespace mipp {

/// One exponential component of the claim-size mixture.
struct ClaimComponent {
  double weight = 1.0;
  double rate = 1.0;
};

/// Surplus R_t = x + c t - (sum of V_t^(2) claims) + sigma W_t, where the
/// claim counter is the twice iterated Poisson process of intensity lambda
/// and claims follow an exponential mixture.
struct RiskModel {
  double c = 2.0;
  double sigma = 0.5;
  double lambda = 1.0;
  std::vector<ClaimComponent> claims{{1.0, 1.0}};

  static RiskModel single_exponential(double c, double sigma, double lambda, double delta);

  /// Throws std::domain_error on an invalid model.
  void validate() const;

  bool is_single_exponential() const { return claims.size() == 1; }
  double mean_claim() const;
  /// psi'(0+) = c - lambda^2 E[claim], the long-run drift.
  double net_drift() const;
  /// c > lambda^2 E[claim] (cδ > λ² for a single exponential).
  bool net_profit_holds() const { return net_drift() > 0.0; }
};

/// Laplace exponent, E exp(theta (R_t - x)) = exp(t psi(theta)), theta >= 0.
double psi_R(const RiskModel& model, double theta);
double psi_R_derivative(const RiskModel& model, double theta);

/// Largest root of psi(theta) = q, q >= 0.
double phi_q(const RiskModel& model, double q);

/// Adjustment coefficient: the root R in (0, min rate) of psi(-R) = 0.
/// Ruin from x is at most exp(-R x). Requires net profit.
double adjustment_coefficient(const RiskModel& model);

/// E[R_1 - x] = c - lambda^2 / delta (single exponential claims only).
double expected_drift(const RiskModel& model);
/// The drift expression as printed, c - exp(-lambda + lambda exp(-lambda + lambda/delta)).
double expected_drift_printed(const RiskModel& model);

}  // namespace mipp
