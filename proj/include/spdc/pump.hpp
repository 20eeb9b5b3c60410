#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spdc/constants.hpp"

namespace spdc {

// Discretized signal-frequency axis (coarse-grained comb).
struct FrequencyGrid {
  Eigen::VectorXd omegas;  // rad/s, strictly increasing, uniform spacing
  double omega_center = 0.0;

  int size() const { return static_cast<int>(omegas.size()); }
  double spacing() const { return (omegas[omegas.size() - 1] - omegas[0]) / (omegas.size() - 1); }
};

// Grid centered on 2 pi c / lambda_signal, spanning
// +- halfwidth_sigmas * sqrt(2) * sigma_omega.
FrequencyGrid build_grid(double center_wavelength_signal_m, double halfwidth_sigmas,
                         double sigma_omega, int n_points);

// Uniform axis of the 2N-1 pairwise sums w_j + w_k of the grid frequencies.
Eigen::VectorXd pump_axis(const FrequencyGrid& grid);

// Complex spectral amplitude of the pump, sampled on the sum-frequency axis.
// Unit discrete L2 norm after construction.
struct PumpProfile {
  Eigen::VectorXd axis;         // rad/s, 2N-1 points
  Eigen::VectorXcd amplitudes;  // same length as axis
  double omega_center = 0.0;    // pump carrier (twice the signal center)

  double power() const { return amplitudes.squaredNorm(); }
};

// sigma_omega = w0^2 dlambda / (4 pi c sqrt(2 ln 2)); dlambda is the FWHM of
// the spectral intensity in wavelength.
double gaussian_sigma_omega(double delta_lambda_fwhm_m, double lambda0_m);

PumpProfile gaussian_pump(const FrequencyGrid& grid, double delta_lambda_fwhm_m,
                          double lambda0_m);

// Multiplies by exp(i phi2/2 (w - w0)^2). Per-bin magnitudes are unchanged.
PumpProfile apply_chirp(PumpProfile pump, double phi2_s2);

// Pulse duration 1/(2 sigma) and its growth under quadratic phase.
double pulse_duration(double sigma_omega);
double chirped_duration_ratio(double phi2_s2, double sigma_omega);

// Natural cubic spline through (x_i, y_i); x strictly increasing.
// Evaluation outside [x_front, x_back] holds the boundary value.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
  double operator()(double x) const;

 private:
  Eigen::VectorXd x_, y_, m_;  // m_ = second derivatives at nodes
};

// Pulse-shaper model: amplitude and phase controls at n_control frequencies
// uniformly spaced across w0 +- window_halfwidth_sigmas * sigma_omega,
// interpolated by natural cubic splines. Outside the window the transfer
// holds the boundary control values.
struct ShaperConfig {
  int n_control = 32;
  double window_halfwidth_sigmas = 3.0;
  double sigma_omega = 0.0;      // pump spectral width setting the window
  Eigen::VectorXd amplitude;     // n_control values, >= 0 physically
  Eigen::VectorXd phase;         // n_control values, radians

  static ShaperConfig identity(int n_control, double window_halfwidth_sigmas,
                               double sigma_omega);

  // Packed parameter vector u = (amplitudes, phases), length 2 n_control.
  Eigen::VectorXd packed() const;
  void set_packed(const Eigen::VectorXd& u);
};

// Transfer function I(w) on the given axis.
Eigen::VectorXcd shaper_transfer(const ShaperConfig& shaper,
                                 const Eigen::VectorXd& axis, double omega_center);

// base(w) * I(w); deliberately not renormalized (power loss is physical).
PumpProfile shaped_pump(const PumpProfile& base, const ShaperConfig& shaper);

// w(u) = sum |alpha_u|^2 / (m(u)^2 sum |alpha_base|^2) with
// m(u) = max |I(w)| over the pump axis. Equals 1 for any uniform transfer.
double pump_power_weight(const ShaperConfig& shaper, const PumpProfile& base);

}  // namespace spdc
