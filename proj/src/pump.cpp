#include "spdc/pump.hpp"

#include <cmath>
#include <stdexcept>

namespace spdc {

FrequencyGrid build_grid(double center_wavelength_signal_m, double halfwidth_sigmas,
                         double sigma_omega, int n_points) {
  if (n_points < 2) throw std::invalid_argument("build_grid: need at least 2 points");
  if (halfwidth_sigmas <= 0.0) throw std::invalid_argument("build_grid: halfwidth must be positive");
  const double w0 = omega_from_wavelength(center_wavelength_signal_m);
  const double half = halfwidth_sigmas * kDownconversionBandwidthScale * sigma_omega;
  FrequencyGrid grid;
  grid.omega_center = w0;
  grid.omegas = Eigen::VectorXd::LinSpaced(n_points, w0 - half, w0 + half);
  return grid;
}

Eigen::VectorXd pump_axis(const FrequencyGrid& grid) {
  const int n = grid.size();
  return Eigen::VectorXd::LinSpaced(2 * n - 1, 2.0 * grid.omegas[0],
                                    2.0 * grid.omegas[n - 1]);
}

double gaussian_sigma_omega(double delta_lambda_fwhm_m, double lambda0_m) {
  const double w0 = omega_from_wavelength(lambda0_m);
  return w0 * w0 * delta_lambda_fwhm_m /
         (4.0 * kPi * kSpeedOfLight * std::sqrt(2.0 * std::log(2.0)));
}

PumpProfile gaussian_pump(const FrequencyGrid& grid, double delta_lambda_fwhm_m,
                          double lambda0_m) {
  if (delta_lambda_fwhm_m <= 0.0) throw std::invalid_argument("gaussian_pump: FWHM must be positive");
  const double w0 = omega_from_wavelength(lambda0_m);
  const double sigma = gaussian_sigma_omega(delta_lambda_fwhm_m, lambda0_m);
  PumpProfile pump;
  pump.axis = pump_axis(grid);
  pump.omega_center = w0;
  const Eigen::ArrayXd detuning = pump.axis.array() - w0;
  Eigen::VectorXd amp = (-detuning.square() / (4.0 * sigma * sigma)).exp();
  amp /= amp.norm();
  pump.amplitudes = amp.cast<std::complex<double>>();
  return pump;
}

PumpProfile apply_chirp(PumpProfile pump, double phi2_s2) {
  const Eigen::ArrayXd detuning = pump.axis.array() - pump.omega_center;
  const Eigen::ArrayXd phase = 0.5 * phi2_s2 * detuning.square();
  pump.amplitudes.array() *=
      (std::complex<double>(0.0, 1.0) * phase.cast<std::complex<double>>()).exp();
  return pump;
}

double pulse_duration(double sigma_omega) { return 1.0 / (2.0 * sigma_omega); }

double chirped_duration_ratio(double phi2_s2, double sigma_omega) {
  const double dt = pulse_duration(sigma_omega);
  const double x = phi2_s2 / (2.0 * dt * dt);
  return std::sqrt(1.0 + x * x);
}

CubicSpline::CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
    : x_(x), y_(y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != n) throw std::invalid_argument("CubicSpline: bad inputs");
  for (int i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("CubicSpline: x not increasing");
  }
  m_ = Eigen::VectorXd::Zero(n);
  if (n == 2) return;  // linear segment, natural BC gives zero curvature

  // Tridiagonal system for interior second derivatives, natural boundary
  // m_0 = m_{n-1} = 0. Thomas algorithm.
  const int k = n - 2;
  Eigen::VectorXd diag(k), rhs(k), sub(k), sup(k);
  for (int i = 0; i < k; ++i) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    sub[i] = h0;
    diag[i] = 2.0 * (h0 + h1);
    sup[i] = h1;
    rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
  }
  for (int i = 1; i < k; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (int i = k - 2; i >= 0; --i) {
    m_[i + 1] = (rhs[i] - sup[i] * m_[i + 2]) / diag[i];
  }
}

double CubicSpline::operator()(double x) const {
  const int n = static_cast<int>(x_.size());
  if (x <= x_[0]) return y_[0];
  if (x >= x_[n - 1]) return y_[n - 1];
  // Locate segment by binary search.
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (x_[mid] <= x) lo = mid; else hi = mid;
  }
  const double h = x_[lo + 1] - x_[lo];
  const double a = (x_[lo + 1] - x) / h;
  const double b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[lo + 1] +
         ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[lo + 1]) * h * h / 6.0;
}

ShaperConfig ShaperConfig::identity(int n_control, double window_halfwidth_sigmas,
                                    double sigma_omega) {
  ShaperConfig s;
  s.n_control = n_control;
  s.window_halfwidth_sigmas = window_halfwidth_sigmas;
  s.sigma_omega = sigma_omega;
  s.amplitude = Eigen::VectorXd::Ones(n_control);
  s.phase = Eigen::VectorXd::Zero(n_control);
  return s;
}

Eigen::VectorXd ShaperConfig::packed() const {
  Eigen::VectorXd u(2 * n_control);
  u.head(n_control) = amplitude;
  u.tail(n_control) = phase;
  return u;
}

void ShaperConfig::set_packed(const Eigen::VectorXd& u) {
  if (u.size() != 2 * n_control) throw std::invalid_argument("ShaperConfig: bad parameter length");
  amplitude = u.head(n_control);
  phase = u.tail(n_control);
}

Eigen::VectorXcd shaper_transfer(const ShaperConfig& shaper,
                                 const Eigen::VectorXd& axis, double omega_center) {
  if (shaper.amplitude.size() != shaper.n_control || shaper.phase.size() != shaper.n_control) {
    throw std::invalid_argument("shaper_transfer: control vectors do not match n_control");
  }
  const double half = shaper.window_halfwidth_sigmas * shaper.sigma_omega;
  if (half <= 0.0) throw std::invalid_argument("shaper_transfer: window is empty");
  const Eigen::VectorXd nodes =
      Eigen::VectorXd::LinSpaced(shaper.n_control, omega_center - half, omega_center + half);
  const CubicSpline amp_spline(nodes, shaper.amplitude);
  const CubicSpline phase_spline(nodes, shaper.phase);
  Eigen::VectorXcd transfer(axis.size());
  for (Eigen::Index i = 0; i < axis.size(); ++i) {
    const double a = amp_spline(axis[i]);
    const double p = phase_spline(axis[i]);
    transfer[i] = a * std::complex<double>(std::cos(p), std::sin(p));
  }
  return transfer;
}

PumpProfile shaped_pump(const PumpProfile& base, const ShaperConfig& shaper) {
  const double half = shaper.window_halfwidth_sigmas * shaper.sigma_omega;
  if (base.omega_center - half < base.axis[0] - 1e-9 ||
      base.omega_center + half > base.axis[base.axis.size() - 1] + 1e-9) {
    throw std::invalid_argument("shaped_pump: shaper window extends beyond pump axis");
  }
  PumpProfile out = base;
  out.amplitudes.array() *= shaper_transfer(shaper, base.axis, base.omega_center).array();
  return out;
}

double pump_power_weight(const ShaperConfig& shaper, const PumpProfile& base) {
  const Eigen::VectorXcd transfer = shaper_transfer(shaper, base.axis, base.omega_center);
  const double peak = transfer.cwiseAbs().maxCoeff();
  if (peak <= 0.0) throw std::invalid_argument("pump_power_weight: degenerate shaper (zero transfer)");
  const double base_power = base.power();
  const double shaped_power =
      (base.amplitudes.array() * transfer.array()).matrix().squaredNorm();
  return shaped_power / (peak * peak * base_power);
}

}  // namespace spdc
