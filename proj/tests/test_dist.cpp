#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mipp/dist.hpp"
#include "mipp/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace mipp;

namespace {

// Reference values computed with mpmath at 50 digits.
constexpr double kQ1 = 0.6321205588285577;
constexpr double kQ2 = 0.4685363946133843;
constexpr double kQ3 = 0.3740823052826776;

double poisson(double mean, int k) { return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)); }

// P(V_t^(2) = k) by brute force: sum over the first layer count j.
double brute_n2(double lam, double t, int k) {
  double s = 0.0;
  for (int j = 0; j < 400; ++j) {
    const double pj = poisson(lam * t, j);
    s += pj * (j == 0 ? (k == 0 ? 1.0 : 0.0) : poisson(lam * j, k));
  }
  return s;
}

}  // namespace

TEST_CASE("char_exponent") {
  CHECK(char_exponent({1.0, 3}, 0.0) == 0.0);
  CHECK(char_exponent({2.0, 1}, std::numbers::ln2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(char_exponent({1.0, 2}, std::numbers::ln2) ==
        doctest::Approx(std::numbers::e - 1.0).epsilon(1e-15));
  CHECK_THROWS_AS(char_exponent({2.0, 8}, 3.0), std::range_error);
  CHECK_THROWS_AS(char_exponent({1.0, 2}, std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
  CHECK(char_exponent({1.0, 50}, -5.0) < 0.0);
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(pmf({-1.0, 2}, 1.0), std::domain_error);
  CHECK_THROWS_AS(pmf({1.0, 0}, 1.0), std::domain_error);
  CHECK_THROWS_AS(pmf({1.0, 2}, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(pmf({1.0, 2}, -1.0), std::domain_error);
}

TEST_CASE("pmf base case and two levels") {
  const Pmf p1 = pmf({1.0, 1}, 1.0);
  CHECK(p1[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const Pmf p2 = pmf({1.0, 2}, 1.0, 1e-13);
  CHECK(p2[0] == doctest::Approx(std::exp(std::exp(-1.0) - 1.0)).epsilon(1e-14));
  CHECK(p2[0] == doctest::Approx(0.5314636053866157).epsilon(1e-14));
  CHECK(std::abs(p2.total() + p2.tail_bound - 1.0) < 1e-12);
  for (double lam : {0.5, 2.0})
    for (int k = 0; k < 12; ++k) {
      CHECK(pmf({lam, 2}, 1.5, 1e-13)[k] == doctest::Approx(brute_n2(lam, 1.5, k)).epsilon(1e-12));
    }
}

TEST_CASE("pmf at t = 0 is a point mass") {
  const Pmf p = pmf({1.0, 3}, 0.0);
  CHECK(p[0] == 1.0);
  CHECK(p.tail_bound == 0.0);
}

TEST_CASE("pmf tail certificate") {
  for (int n = 1; n <= 4; ++n)
    for (double lam : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 2.0}) {
        const Pmf p = pmf({lam, n}, t, 1e-10);
        CHECK(p.tail_bound <= 1e-10);
        CHECK(std::abs(p.total() + p.tail_bound - 1.0) < 1e-12);
        CHECK(p.masses.minCoeff() >= 0.0);
        CHECK(p.masses.maxCoeff() <= 1.0);
      }
}

TEST_CASE("pmf truncation error carries the achieved bound") {
  try {
    pmf({3.0, 3}, 5.0, 1e-10, 50);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.achieved_bound() > 1e-10);
  }
}

TEST_CASE("q sequence") {
  const Eigen::VectorXd q = q_sequence(1.0, 3);
  CHECK(q[0] == doctest::Approx(kQ1).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(kQ2).epsilon(1e-15));
  CHECK(q[2] == doctest::Approx(kQ3).epsilon(1e-15));
  const Eigen::VectorXd tiny = q_sequence(1e-9, 5);
  CHECK(tiny.maxCoeff() < 1e-8);
  CHECK_THROWS_AS(q_sequence(0.0, 2), std::domain_error);
}

TEST_CASE("sojourn rate") {
  CHECK(sojourn_rate({3.0, 1}) == 3.0);
  CHECK(sojourn_rate({1.0, 2}) == doctest::Approx(kQ1).epsilon(1e-15));
  CHECK(sojourn_rate({1.0, 3}) == doctest::Approx(kQ2).epsilon(1e-15));
}

TEST_CASE("first jump pmf") {
  const Pmf f = first_jump_pmf({1.0, 2});
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(0.5819767068693264).epsilon(1e-14));
  CHECK(std::abs(f.total() + f.tail_bound - 1.0) < 1e-12);
  const Pmf f3 = first_jump_pmf({1.0, 3}, 1e-12);
  CHECK(f3[1] == doctest::Approx(pmf({1.0, 2}, 1.0, 1e-13)[1] / kQ2).epsilon(1e-12));
  CHECK_THROWS_AS(first_jump_pmf({1.0, 1}), std::domain_error);
}

TEST_CASE("joint mgf of the first jump") {
  CHECK(joint_mgf_first_jump({1.0, 2}, 0.0, 0.0) == 1.0);
  CHECK(joint_mgf_first_jump({1.0, 2}, -1.0, 0.0) ==
        doctest::Approx(0.3873001632197180).epsilon(1e-15));
  // Independent evaluation: J ~ Exp(r) independent of the size law.
  const double r = kQ1;
  const Pmf f = first_jump_pmf({1.0, 2}, 1e-13);
  double size_mgf = 0.0;
  for (Eigen::Index k = 1; k < f.size(); ++k) size_mgf += f.masses[k] * std::exp(-0.5 * k);
  CHECK(joint_mgf_first_jump({1.0, 2}, -0.5, -0.5) ==
        doctest::Approx(r / (r + 0.5) * size_mgf).epsilon(1e-12));
  CHECK_THROWS_AS(joint_mgf_first_jump({1.0, 2}, kQ1, 0.0), std::domain_error);
  // The printed form disagrees away from the origin.
  CHECK(std::abs(joint_transform_printed({1.0, 2}, -0.5, -0.5) -
                 joint_mgf_first_jump({1.0, 2}, -0.5, -0.5)) > 1e-3);
}

TEST_CASE("levy measure") {
  const LevyMeasure nu = levy_measure({1.0, 2}, 0.0, 30);
  CHECK_FALSE(nu.masses[0].is_jump);
  CHECK(nu.masses[0].mass == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(nu.masses[1].mass == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(nu.jump_rate() == doctest::Approx(kQ1).epsilon(1e-12));
  const LevyMeasure tilted = levy_measure({1.0, 2}, 0.4, 30);
  for (int k = 0; k <= 30; ++k) {
    CHECK(tilted.masses[k].mass == doctest::Approx(std::exp(0.4 * k) * nu.masses[k].mass).epsilon(1e-14));
  }
  CHECK_THROWS_AS(levy_measure({1.0, 2}, 2.0, 3), TruncationError);
}

TEST_CASE("closed-form moments") {
  const MomentSet m = moments_closed({1.0, 2}, 1.0);
  CHECK(m.mean == 1.0);
  CHECK(m.variance == 2.0);
  CHECK(m.skewness == doctest::Approx(5.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-15));
  // n t = 2: (6 n^2 - 5 n + 1) / (2 n t) + 3
  CHECK(m.kurtosis == doctest::Approx(15.0 / 4.0 + 3.0).epsilon(1e-15));

  // Against central moments of the pmf.
  for (double lam : {0.5, 2.0})
    for (int n = 1; n <= 3; ++n) {
      const Pmf p = pmf({lam, n}, 1.0, 1e-13);
      double mean = 0.0;
      for (Eigen::Index k = 0; k < p.size(); ++k) mean += k * p.masses[k];
      double c2 = 0.0, c3 = 0.0, c4 = 0.0;
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        const double d = k - mean;
        c2 += d * d * p.masses[k];
        c3 += d * d * d * p.masses[k];
        c4 += d * d * d * d * p.masses[k];
      }
      const MomentSet c = moments_closed({lam, n}, 1.0);
      CHECK(c.mean == doctest::Approx(mean).epsilon(1e-9));
      CHECK(c.variance == doctest::Approx(c2).epsilon(1e-9));
      CHECK(c.skewness == doctest::Approx(c3 / std::pow(c2, 1.5)).epsilon(1e-8));
      CHECK(c.kurtosis == doctest::Approx(c4 / (c2 * c2)).epsilon(1e-8));
    }
  CHECK_THROWS_AS(moments_closed({1e10, 40}, 1.0), std::range_error);
}

TEST_CASE("bell polynomials") {
  CHECK(bell_polynomial(0, 2.5) == 1.0);
  CHECK(bell_polynomial(1, 2.5) == 2.5);
  // Touchard: x^4 + 6x^3 + 7x^2 + x
  const double x = 1.7;
  CHECK(bell_polynomial(4, x) == doctest::Approx(x * x * x * x + 6 * x * x * x + 7 * x * x + x).epsilon(1e-14));
  CHECK(moment_bell({1.0, 2}, 1.0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(moment_bell({1.0, 2}, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(moment_bell({1.0, 2}, 1.0, 2) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(moment_bell({1.0, 2}, 1.0, 5), std::domain_error);
}

TEST_CASE("large-n limits") {
  const auto lim = skew_kurt_limits(2.0, 1.0);
  REQUIRE(lim.has_value());
  CHECK(lim->skewness == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  const MomentSet m = moments_closed({2.0, 40}, 1.0);
  CHECK(std::abs(m.skewness / lim->skewness - 1.0) < 1e-6);
  CHECK(std::abs(m.kurtosis / lim->kurtosis - 1.0) < 1e-6);
  CHECK_FALSE(skew_kurt_limits(0.5, 1.0).has_value());
}

TEST_CASE("governing equation") {
  const MippParams p{1.0, 2};
  CHECK(governing_rhs(p, 1.0, 0) ==
        doctest::Approx(-kQ1 * pmf(p, 1.0, 1e-14)[0]).epsilon(1e-14));
  for (int k = 0; k <= 10; ++k) {
    const double r1 = governing_residual(p, 1.0, k, 1e-4);
    const double r2 = governing_residual(p, 1.0, k, 2e-4);
    CHECK(r1 <= 1e-3);
    CHECK(r2 / r1 > 2.0);
    CHECK(r2 / r1 < 8.0);
  }
  CHECK(governing_residual(p, 1.0, 0, 1e-3) <= 1e-5);
  CHECK_THROWS_AS(governing_residual(p, 1.0, 0, 2.0), std::domain_error);
}
