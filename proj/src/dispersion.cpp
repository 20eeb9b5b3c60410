#include "spdc/dispersion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spdc {

SellmeierCoefficients SellmeierCoefficients::bibo() {
  return SellmeierCoefficients{
      {3.07403, 0.03231, 0.03163, 0.013376},
      {3.16940, 0.03717, 0.03483, 0.01827},
      {3.6545, 0.05112, 0.03713, 0.02261},
  };
}

const AxisCoefficients& SellmeierCoefficients::axis(CrystalAxis a) const {
  switch (a) {
    case CrystalAxis::X: return x;
    case CrystalAxis::Y: return y;
    default: return z;
  }
}

double sellmeier_index(CrystalAxis axis, double lambda_um,
                       const SellmeierCoefficients& coeffs) {
  if (!(lambda_um >= kSellmeierLambdaMinUm && lambda_um <= kSellmeierLambdaMaxUm)) {
    throw std::domain_error("sellmeier_index: wavelength " + std::to_string(lambda_um) +
                            " um outside validity window [0.3, 1.1] um");
  }
  const AxisCoefficients& c = coeffs.axis(axis);
  const double l2 = lambda_um * lambda_um;
  if (l2 <= c.C) {
    throw std::domain_error("sellmeier_index: wavelength crosses resonance pole");
  }
  const double n2 = c.A + c.B / (l2 - c.C) - c.D * l2;
  if (n2 <= 0.0) {
    throw std::domain_error("sellmeier_index: negative radicand");
  }
  return std::sqrt(n2);
}

double extraordinary_index(double lambda_um, double theta,
                           const SellmeierCoefficients& coeffs) {
  const double ny = sellmeier_index(CrystalAxis::Y, lambda_um, coeffs);
  const double nz = sellmeier_index(CrystalAxis::Z, lambda_um, coeffs);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  return 1.0 / std::sqrt(ct * ct / (ny * ny) + st * st / (nz * nz));
}

double pump_wave_number(double omega, const SellmeierCoefficients& coeffs) {
  const double lambda_um = wavelength_from_omega(omega) * 1e6;
  return omega * sellmeier_index(CrystalAxis::X, lambda_um, coeffs) / kSpeedOfLight;
}

double signal_wave_number(double omega, double theta,
                          const SellmeierCoefficients& coeffs) {
  const double lambda_um = wavelength_from_omega(omega) * 1e6;
  return omega * extraordinary_index(lambda_um, theta, coeffs) / kSpeedOfLight;
}

double solve_phase_matching_angle(double pump_central_wavelength_m,
                                  const SellmeierCoefficients& coeffs) {
  const double lambda_p_um = pump_central_wavelength_m * 1e6;
  const double lambda_s_um = 2.0 * lambda_p_um;

  auto residual = [&](double theta) {
    return extraordinary_index(lambda_s_um, theta, coeffs) -
           sellmeier_index(CrystalAxis::X, lambda_p_um, coeffs);
  };

  double lo = kPi / 2.0 + 1e-9;
  double hi = kPi - 1e-9;
  double flo, fhi;
  try {
    flo = residual(lo);
    fhi = residual(hi);
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string("solve_phase_matching_angle: not phase-matchable (") +
                            e.what() + ")");
  }
  if (flo == 0.0 && fhi == 0.0) {
    // Degenerate isotropic case: every angle matches.
    return 0.5 * (lo + hi);
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw std::domain_error("solve_phase_matching_angle: not phase-matchable, "
                            "no sign change on (pi/2, pi)");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = residual(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double phase_mismatch(double omega_j, double omega_k,
                      const CrystalConfig& crystal,
                      const SellmeierCoefficients& coeffs) {
  const double kp = pump_wave_number(omega_j + omega_k, coeffs);
  const double ks_j = signal_wave_number(omega_j, crystal.theta, coeffs);
  const double ks_k = signal_wave_number(omega_k, crystal.theta, coeffs);
  return (kp - ks_j - ks_k) * crystal.length / 2.0;
}

}  // namespace spdc
