#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <vector>

namespace mipp {

/// Multiply iterated Poisson process V^(n): n Poisson layers of common
/// intensity `lambda`, each one run on the clock of the previous.
struct MippParams {
  double lambda = 1.0;
  int n = 1;

  /// Throws std::domain_error unless lambda is positive and finite and n >= 1.
  void validate() const;
};

/// Truncated probability mass table over k = 0, 1, ..., size()-1.
/// `tail_bound` is the mass not represented in `masses`.
struct Pmf {
  Eigen::VectorXd masses;
  double tail_bound = 0.0;
  double t = 0.0;

  Eigen::Index size() const { return masses.size(); }
  double operator[](Eigen::Index k) const { return k < masses.size() ? masses[k] : 0.0; }
  double total() const { return masses.sum(); }
};

struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  /// Standardized fourth central moment (3 for a Gaussian).
  double kurtosis = 0.0;
};

struct LevyMass {
  int k = 0;
  double mass = 0.0;
  /// False for the k = 0 atom, which is reported but is not a jump.
  bool is_jump = true;
};

struct LevyMeasure {
  std::vector<LevyMass> masses;
  /// Tilted mass beyond kmax (exact up to rounding: total minus listed).
  double tail = 0.0;

  /// Sum of the jump masses (k >= 1).
  double jump_rate() const;
};

struct SkewKurtLimit {
  double skewness;
  double kurtosis;
};

inline constexpr std::size_t kDefaultMaxSupport = 200000;

/// l_n(theta) with E exp(theta V_t) = exp(t l_n(theta)).
/// std::range_error on overflow, std::domain_error on NaN.
double char_exponent(const MippParams& params, double theta);

/// Exponent under the exponentially tilted measure, l(z + theta) - l(theta).
double tilted_char_exponent(const MippParams& params, double theta, double z);

/// P(V_t^(n) = k) for all k up to a support certified to leave at most
/// `eps` of mass out. Throws TruncationError if that needs more than
/// `max_support` states.
Pmf pmf(const MippParams& params, double t, double eps = 1e-10,
        std::size_t max_support = kDefaultMaxSupport);

/// q_j = P(V_1^(j) > 0) for j = 1..m (index 0 holds q_1).
Eigen::VectorXd q_sequence(double lambda, int m);

/// Exponential rate of every holding time of V^(n).
double sojourn_rate(const MippParams& params);

/// Law of the size of the first jump (masses[0] == 0). Requires n >= 2.
Pmf first_jump_pmf(const MippParams& params, double eps = 1e-10);

/// E exp(s1 J_1 + s2 V(J_1)) for the first jump time J_1. Requires n >= 2
/// and s1 < sojourn_rate(params).
double joint_mgf_first_jump(const MippParams& params, double s1, double s2);

/// The transform exactly as printed, 1 - (s1 + l_n(s2)) / (lambda q + s1).
/// Kept for comparison only; it does not match the simulated law.
double joint_transform_printed(const MippParams& params, double s1, double s2);

/// nu^theta(k) = lambda e^{k theta} P(V_1^(n-1) = k), k = 0..kmax.
LevyMeasure levy_measure(const MippParams& params, double theta, int kmax,
                         double eps = 1e-10);

MomentSet moments_closed(const MippParams& params, double t);

/// Touchard/Bell polynomial B_m(x) = E[N^m], N ~ Poisson(x).
double bell_polynomial(int m, double x);

/// m-th raw moment of V_t^(n) from the conditional Poisson structure.
double moment_bell(const MippParams& params, double t, int m, double eps = 1e-12);

/// Large-n limits of skewness and kurtosis. Empty when they diverge
/// (lambda <= 1).
std::optional<SkewKurtLimit> skew_kurt_limits(double lambda, double t);

/// Right-hand side of the forward equation for d/dt P(V_t = k).
double governing_rhs(const MippParams& params, double t, int k, double eps = 1e-14);

/// |central difference of P(V_t = k) - governing_rhs|.
double governing_residual(const MippParams& params, double t, int k, double dt,
                          double eps = 1e-14);

}  // namespace mipp
