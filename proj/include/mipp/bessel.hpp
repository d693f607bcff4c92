#pragma once

namespace mipp {

/// Modified Bessel function of the first kind, order one, for z >= 0.
double bessel_i1(double z);

/// exp(-z) I_1(z), finite for all z >= 0.
double bessel_i1_scaled(double z);

/// The two branches, exposed so their agreement can be checked.
double bessel_i1_series(double z);
double bessel_i1_asymptotic_scaled(double z);

/// Ascending series and asymptotic expansion switch over here.
inline constexpr double kBesselSwitch = 15.0;

}  // namespace mipp
