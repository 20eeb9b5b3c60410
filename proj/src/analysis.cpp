#include "spdc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spdc {

namespace {

ChirpScanRow make_row(const FrequencyGrid& grid, const PhaseMatchTable& table,
                      const PumpProfile& pump, double phi2, double ratio, int top_count) {
  const JointSpectralMatrix jsa = build_jsa(table, grid, pump);
  ChirpScanRow row;
  row.phi2 = phi2;
  row.dt_ratio = ratio;
  row.lambda_tot = total_gain_invariant(jsa);
  const Eigen::VectorXd gains = singular_gains(jsa.L);
  row.lambda11_norm = gains[0];
  row.top_gains = gains.head(std::min<int>(top_count, gains.size()));
  return row;
}

}  // namespace

ChirpScanResult chirp_scan(const FrequencyGrid& grid, const PhaseMatchTable& table,
                           double delta_lambda_fwhm, double lambda0,
                           const std::vector<double>& phi2_values, int top_count) {
  const double sigma = gaussian_sigma_omega(delta_lambda_fwhm, lambda0);
  const PumpProfile base = gaussian_pump(grid, delta_lambda_fwhm, lambda0);

  ChirpScanResult result;
  result.chirped.resize(phi2_values.size());
  result.duration_matched.resize(phi2_values.size());

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(phi2_values.size()); ++i) {
    const double phi2 = phi2_values[i];
    const double ratio = chirped_duration_ratio(phi2, sigma);
    result.chirped[i] = make_row(grid, table, apply_chirp(base, phi2), phi2, ratio, top_count);
    // Same duration without chirp: narrow the spectrum by the same factor.
    // gaussian_pump renormalizes, which keeps the pulse energy fixed.
    const PumpProfile longer = gaussian_pump(grid, delta_lambda_fwhm / ratio, lambda0);
    result.duration_matched[i] = make_row(grid, table, longer, 0.0, ratio, top_count);
  }

  const double ref = make_row(grid, table, base, 0.0, 1.0, 1).lambda11_norm;
  result.lambda11_ref = ref;
  for (auto* family : {&result.chirped, &result.duration_matched}) {
    for (ChirpScanRow& row : *family) {
      row.lambda11_norm /= ref;
      row.top_gains /= ref;
    }
  }
  return result;
}

int count_near_max(const Eigen::VectorXd& gains, double fraction) {
  if (gains.size() == 0) return 0;
  const double threshold = fraction * gains[0];
  int count = 0;
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    if (gains[i] > threshold) ++count;
  }
  return count;
}

namespace {

// Unwraps arg(v) walking outward from the amplitude peak, so jumps are
// resolved where the phase is well defined.
Eigen::VectorXd unwrap_from_peak(const Eigen::VectorXcd& mode) {
  const int n = static_cast<int>(mode.size());
  Eigen::VectorXd phase(n);
  for (int i = 0; i < n; ++i) phase[i] = std::arg(mode[i]);
  int peak = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(mode[i]);
    if (a > best) { best = a; peak = i; }
  }
  for (int i = peak + 1; i < n; ++i) {
    double d = phase[i] - phase[i - 1];
    while (d > kPi) { phase[i] -= kTwoPi; d -= kTwoPi; }
    while (d < -kPi) { phase[i] += kTwoPi; d += kTwoPi; }
  }
  for (int i = peak - 1; i >= 0; --i) {
    double d = phase[i] - phase[i + 1];
    while (d > kPi) { phase[i] -= kTwoPi; d -= kTwoPi; }
    while (d < -kPi) { phase[i] += kTwoPi; d += kTwoPi; }
  }
  return phase;
}

Eigen::VectorXd weighted_polyfit(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& weights, int degree) {
  // Scale x to O(1) for conditioning, fit, then unscale the coefficients.
  const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd vander(n, degree + 1);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      vander(i, d) = p;
      p *= x[i] / scale;
    }
  }
  const Eigen::VectorXd sqrt_w = weights.cwiseSqrt();
  const Eigen::MatrixXd a = sqrt_w.asDiagonal() * vander;
  const Eigen::VectorXd b = sqrt_w.cwiseProduct(y);
  Eigen::VectorXd coeffs = a.colPivHouseholderQr().solve(b);
  for (int d = 0; d <= degree; ++d) coeffs[d] /= std::pow(scale, d);
  return coeffs;
}

}  // namespace

SpectralPhaseFit fit_spectral_phase(const Eigen::VectorXd& omegas,
                                    const Eigen::VectorXcd& mode, double omega_ref,
                                    int max_degree) {
  if (omegas.size() != mode.size()) throw std::invalid_argument("fit_spectral_phase: size mismatch");
  if (max_degree < 1) throw std::invalid_argument("fit_spectral_phase: degree must be >= 1");
  const Eigen::VectorXd weights = mode.cwiseAbs2();
  const double total = weights.sum();
  if (!(total > 0.0) || weights.maxCoeff() <= 1e-30 * total) {
    throw std::invalid_argument("fit_spectral_phase: mode has no support");
  }
  const Eigen::VectorXd phase = unwrap_from_peak(mode);
  const Eigen::VectorXd x = omegas.array() - omega_ref;
  const Eigen::VectorXd coeffs = weighted_polyfit(x, phase, weights, max_degree);

  SpectralPhaseFit fit;
  fit.coeffs = coeffs;
  fit.delay = coeffs.size() > 1 ? coeffs[1] : 0.0;
  fit.quadratic = coeffs.size() > 2 ? coeffs[2] : 0.0;
  fit.cubic = coeffs.size() > 3 ? coeffs[3] : 0.0;
  double ss = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double p = 0.0, xp = 1.0;
    for (Eigen::Index d = 0; d < coeffs.size(); ++d) {
      p += coeffs[d] * xp;
      xp *= x[i];
    }
    ss += weights[i] * (phase[i] - p) * (phase[i] - p);
  }
  fit.residual = std::sqrt(ss / total);
  return fit;
}

std::pair<double, Eigen::VectorXcd> subtract_linear_phase(const Eigen::VectorXd& omegas,
                                                          const Eigen::VectorXcd& mode,
                                                          double omega_ref) {
  const SpectralPhaseFit fit = fit_spectral_phase(omegas, mode, omega_ref, 1);
  Eigen::VectorXcd out(mode.size());
  for (Eigen::Index i = 0; i < mode.size(); ++i) {
    const double shift = fit.delay * (omegas[i] - omega_ref);
    out[i] = mode[i] * std::polar(1.0, -shift);
  }
  return {fit.delay, std::move(out)};
}

double schmidt_number(const Eigen::VectorXd& gains) {
  const double s2 = gains.squaredNorm();
  if (!(s2 > 0.0)) throw std::invalid_argument("schmidt_number: all gains vanish");
  const double s4 = gains.array().square().square().sum();
  return s2 * s2 / s4;
}

std::vector<SqueezingScanPoint> squeezing_scan(const NullifierKernel& kernel,
                                               const std::vector<int>& perm,
                                               double leading_gain,
                                               const std::vector<double>& eta_t_values) {
  std::vector<SqueezingScanPoint> points(eta_t_values.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(eta_t_values.size()); ++i) {
    const double eta_t = eta_t_values[i];
    points[i].eta_t = eta_t;
    points[i].leading_db = squeezing_db(0.5 * std::exp(-2.0 * eta_t * leading_gain));
    points[i].mean_nullifier_variance =
        optimize_frexel_phases(kernel, perm, eta_t).mean_variance;
  }
  return points;
}

OverlapResult best_real_combination_overlap(const Eigen::VectorXcd& target,
                                            const Eigen::MatrixXcd& supermode_rows) {
  const int k = static_cast<int>(supermode_rows.rows());
  if (k < 1) throw std::invalid_argument("best_real_combination_overlap: need K >= 1");
  // g_k = <s_k, t>; |c^T g|^2 = (c^T a)^2 + (c^T b)^2 with a = Re g, b = Im g.
  const Eigen::VectorXcd g = supermode_rows.conjugate() * target;
  const Eigen::VectorXd a = g.real();
  const Eigen::VectorXd b = g.imag();

  // Top eigenpair of a a^T + b b^T from the 2x2 Gram matrix of (a, b).
  const double aa = a.squaredNorm(), bb = b.squaredNorm(), ab = a.dot(b);
  OverlapResult result;
  result.combined_count = k;
  const double trace = aa + bb;
  if (trace <= 0.0) {
    result.coefficients = Eigen::VectorXd::Zero(k);
    result.coefficients[0] = 1.0;
    result.overlap = 0.0;
    return result;
  }
  const double disc = std::sqrt(std::max(0.0, (aa - bb) * (aa - bb) + 4.0 * ab * ab));
  const double lambda_max = 0.5 * (trace + disc);

  // Eigenvector of [[aa, ab], [ab, bb]] for lambda_max gives the (alpha,
  // beta) mixing of a and b.
  double alpha = ab;
  double beta = lambda_max - aa;
  if (std::abs(alpha) + std::abs(beta) < 1e-300 * trace) {
    alpha = aa >= bb ? 1.0 : 0.0;
    beta = aa >= bb ? 0.0 : 1.0;
  }
  Eigen::VectorXd c = alpha * a + beta * b;
  const double nc = c.norm();
  if (nc > 0.0) {
    c /= nc;
  } else {
    c = Eigen::VectorXd::Zero(k);
    c[0] = 1.0;
  }
  result.coefficients = c;
  const double ca = c.dot(a), cb = c.dot(b);
  result.overlap = std::sqrt(ca * ca + cb * cb);
  return result;
}

}  // namespace spdc
