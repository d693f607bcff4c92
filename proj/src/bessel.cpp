#include "mipp/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mipp {

namespace {

// sum_m (z/2)^{2m+1} / (m! (m+1)!); all terms positive.
double ascending_series(double z) {
  const double half = 0.5 * z;
  const double h2 = half * half;
  double term = half;
  double sum = half;
  for (int m = 1; m < 500; ++m) {
    term *= h2 / (static_cast<double>(m) * static_cast<double>(m + 1));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// e^{-z} I_1(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(1) / z^k, summed up to
// the smallest term.
double asymptotic_scaled(double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (odd * odd - 4.0) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double bessel_i1_series(double z) { return ascending_series(z); }

double bessel_i1_asymptotic_scaled(double z) { return asymptotic_scaled(z); }

double bessel_i1(double z) {
  if (!(z >= 0.0)) throw std::domain_error("bessel_i1: z must be >= 0");
  if (z <= kBesselSwitch) return ascending_series(z);
  return std::exp(z) * asymptotic_scaled(z);
}

double bessel_i1_scaled(double z) {
  if (!(z >= 0.0)) throw std::domain_error("bessel_i1_scaled: z must be >= 0");
  if (z <= kBesselSwitch) return std::exp(-z) * ascending_series(z);
  return asymptotic_scaled(z);
}

}  // namespace mipp
