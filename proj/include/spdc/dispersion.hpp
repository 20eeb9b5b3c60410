#pragma once

#include "spdc/constants.hpp"

namespace spdc {

enum class CrystalAxis { X, Y, Z };

struct AxisCoefficients {
  double A, B, C, D;  // n^2 = A + B/(lambda^2 - C) - D lambda^2, lambda in um
};

struct SellmeierCoefficients {
  AxisCoefficients x, y, z;

  // BiBO (BiB3O6) coefficients.
  static SellmeierCoefficients bibo();

  const AxisCoefficients& axis(CrystalAxis a) const;
};

struct CrystalConfig {
  double length = 0.5e-3;                      // m
  double theta = 0.0;                          // phase-matching angle, rad
  double phi_angle = kPi / 2.0;                // fixed for type I BiBO
  double pump_central_wavelength = 397.5e-9;   // m
};

// Wavelength range over which the Sellmeier fit is trusted, in um.
inline constexpr double kSellmeierLambdaMinUm = 0.3;
inline constexpr double kSellmeierLambdaMaxUm = 1.1;

// Principal refractive index along one crystal axis. lambda in um.
double sellmeier_index(CrystalAxis axis, double lambda_um,
                       const SellmeierCoefficients& coeffs);

// Index of the extraordinary wave propagating at angle theta in the yz plane.
double extraordinary_index(double lambda_um, double theta,
                           const SellmeierCoefficients& coeffs);

// Wave number of the x-polarized pump at angular frequency omega (rad/s).
double pump_wave_number(double omega, const SellmeierCoefficients& coeffs);

// Wave number of the extraordinary signal at angular frequency omega (rad/s).
double signal_wave_number(double omega, double theta,
                          const SellmeierCoefficients& coeffs);

// Solves k_p(2 w0) - 2 k_e(w0, theta) = 0 for theta in (pi/2, pi) by
// bisection. Throws if the bracket has no sign change.
double solve_phase_matching_angle(double pump_central_wavelength_m,
                                  const SellmeierCoefficients& coeffs);

// (k_p(wj+wk) - k_s(wj) - k_s(wk)) * l / 2, in radians.
double phase_mismatch(double omega_j, double omega_k,
                      const CrystalConfig& crystal,
                      const SellmeierCoefficients& coeffs);

}  // namespace spdc
