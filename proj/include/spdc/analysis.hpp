#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "spdc/jsa.hpp"
#include "spdc/modes.hpp"

namespace spdc {

struct ChirpScanRow {
  double phi2 = 0.0;          // s^2
  double dt_ratio = 1.0;      // pulse-duration growth
  double lambda11_norm = 1.0; // leading gain / leading gain at phi2 = 0
  double lambda_tot = 0.0;    // sum of squared gains
  Eigen::VectorXd top_gains;  // leading gains, normalized like lambda11_norm
};

struct ChirpScanResult {
  std::vector<ChirpScanRow> chirped;
  std::vector<ChirpScanRow> duration_matched;  // unchirped, same duration
  double lambda11_ref = 0.0;                   // leading gain at phi2 = 0
};

// Scans phi2 over the given values. Each chirped row uses the same Gaussian
// with a quadratic phase; each duration-matched row uses an unchirped pump
// with sigma reduced to give an equal duration, renormalized to unit energy.
ChirpScanResult chirp_scan(const FrequencyGrid& grid, const PhaseMatchTable& table,
                           double delta_lambda_fwhm, double lambda0,
                           const std::vector<double>& phi2_values, int top_count = 100);

// Gains within the given fraction of the largest.
int count_near_max(const Eigen::VectorXd& gains, double fraction);

struct SpectralPhaseFit {
  double delay = 0.0;       // linear coefficient d(phase)/d(omega), seconds
  double quadratic = 0.0;   // s^2
  double cubic = 0.0;       // s^3
  double residual = 0.0;    // weighted rms of the fit residual, radians
  Eigen::VectorXd coeffs;   // full polynomial in (omega - omega_ref)
};

// Weighted least-squares polynomial fit of the unwrapped spectral phase,
// weights |v|^2, unwrapping walks outward from the amplitude peak.
SpectralPhaseFit fit_spectral_phase(const Eigen::VectorXd& omegas,
                                    const Eigen::VectorXcd& mode, double omega_ref,
                                    int max_degree);

// Removes the weighted-least-squares linear phase; returns the delay (the
// linear coefficient, in seconds) and the rephased mode.
std::pair<double, Eigen::VectorXcd> subtract_linear_phase(const Eigen::VectorXd& omegas,
                                                          const Eigen::VectorXcd& mode,
                                                          double omega_ref);

// (sum g^2)^2 / sum g^4.
double schmidt_number(const Eigen::VectorXd& gains);

struct SqueezingScanPoint {
  double eta_t = 0.0;
  double leading_db = 0.0;
  double mean_nullifier_variance = 0.0;
};

// Mean nullifier variance versus gain scale for a fixed frexel assignment;
// band phases are re-optimized at every point.
std::vector<SqueezingScanPoint> squeezing_scan(const NullifierKernel& kernel,
                                               const std::vector<int>& perm,
                                               double leading_gain,
                                               const std::vector<double>& eta_t_values);

struct OverlapResult {
  int combined_count = 0;
  Eigen::VectorXd coefficients;  // real, unit norm
  double overlap = 0.0;          // |<combination, target>| in [0, 1]
};

// Maximizes |sum_k c_k <s_k, target>| over real unit vectors c. Closed form:
// the top eigenvalue of Re(g) Re(g)^T + Im(g) Im(g)^T with g_k = <s_k, t>.
OverlapResult best_real_combination_overlap(const Eigen::VectorXcd& target,
                                            const Eigen::MatrixXcd& supermode_rows);

}  // namespace spdc
