#pragma once

#include <cmath>
#include <numbers>

namespace spdc {

// Vacuum speed of light, m/s (exact by SI definition).
inline constexpr double kSpeedOfLight = 299'792'458.0;

// Shot-noise variance of a single quadrature; quadratures are
// q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)).
inline constexpr double kVacuumVariance = 0.5;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signal-grid halfwidth is expressed in pump spectral sigmas; the factor
// sqrt(2) converts to the bandwidth scale of the downconverted field.
inline constexpr double kDownconversionBandwidthScale = std::numbers::sqrt2;

inline double omega_from_wavelength(double lambda_m) {
  return kTwoPi * kSpeedOfLight / lambda_m;
}

inline double wavelength_from_omega(double omega) {
  return kTwoPi * kSpeedOfLight / omega;
}

}  // namespace spdc
