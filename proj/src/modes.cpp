#include "spdc/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spdc {

namespace {
using Complex = std::complex<double>;
const Complex kI(0.0, 1.0);
}  // namespace

ClusterGraph ClusterGraph::linear(int m) {
  ClusterGraph g;
  g.G = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j + 1 < m; ++j) {
    g.G(j, j + 1) = 1.0;
    g.G(j + 1, j) = 1.0;
  }
  return g;
}

ClusterGraph ClusterGraph::from_edges(int m, const std::vector<std::pair<int, int>>& edges) {
  ClusterGraph g;
  g.G = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= m || b >= m) throw std::invalid_argument("ClusterGraph: edge out of range");
    if (a == b) throw std::invalid_argument("ClusterGraph: self loop");
    g.G(a, b) = 1.0;
    g.G(b, a) = 1.0;
  }
  return g;
}

FrexelSpec FrexelSpec::uniform(int m, double lambda_red, double lambda_blue) {
  FrexelSpec spec;
  const double lo = omega_from_wavelength(lambda_red);
  const double hi = omega_from_wavelength(lambda_blue);
  spec.band_edges = Eigen::VectorXd::LinSpaced(m + 1, lo, hi);
  spec.thetas = Eigen::VectorXd::Zero(m);
  return spec;
}

ModeMatrix build_frexels(const FrexelSpec& spec, const FrequencyGrid& grid) {
  const int m = spec.band_count();
  if (m < 1) throw std::invalid_argument("build_frexels: need at least one band");
  if (spec.thetas.size() != m) throw std::invalid_argument("build_frexels: phase count mismatch");
  for (int j = 0; j < m; ++j) {
    if (!(spec.band_edges[j + 1] > spec.band_edges[j])) {
      throw std::invalid_argument("build_frexels: band edges not increasing");
    }
  }
  const int n = grid.size();
  const double w_c = omega_from_wavelength(spec.envelope_center_wavelength);
  const double sigma = gaussian_sigma_omega(spec.envelope_fwhm, spec.envelope_center_wavelength);

  ModeMatrix modes;
  modes.D = Eigen::MatrixXcd::Zero(m, n);
  for (int j = 0; j < m; ++j) {
    // Half-open bands keep supports disjoint; the last band includes its
    // upper edge.
    const double lo = spec.band_edges[j];
    const double hi = spec.band_edges[j + 1];
    double norm2 = 0.0;
    for (int l = 0; l < n; ++l) {
      const double w = grid.omegas[l];
      const bool inside = (w >= lo) && (j + 1 == m ? w <= hi : w < hi);
      if (inside) {
        const double a = std::exp(-(w - w_c) * (w - w_c) / (4.0 * sigma * sigma));
        modes.D(j, l) = a;
        norm2 += a * a;
      }
    }
    if (norm2 <= 0.0) {
      throw std::invalid_argument("build_frexels: band " + std::to_string(j + 1) +
                                  " contains no grid point");
    }
    modes.D.row(j) *= std::polar(1.0 / std::sqrt(norm2), spec.thetas[j]);
  }
  return modes;
}

Eigen::MatrixXd quadrature_transform(const ModeMatrix& modes) {
  const int m = modes.mode_count();
  const Eigen::MatrixXcd gram = modes.D * modes.D.adjoint();
  if ((gram - Eigen::MatrixXcd::Identity(m, m)).norm() > 1e-10 * std::sqrt(double(m))) {
    throw std::invalid_argument("quadrature_transform: mode rows are not orthonormal");
  }
  return real_quadrature_rep(modes.D);
}

CovarianceMatrix mode_covariance(const CovarianceMatrix& gamma_omega, const ModeMatrix& modes) {
  const Eigen::MatrixXd r = quadrature_transform(modes);
  if (r.cols() != gamma_omega.gamma.rows()) {
    throw std::invalid_argument("mode_covariance: dimension mismatch");
  }
  CovarianceMatrix out;
  out.gamma = r * gamma_omega.gamma * r.transpose();
  return out;
}

CovarianceMatrix mode_covariance(const SupermodeSet& set, double eta_t, const ModeMatrix& modes) {
  // R_D R1 is the real representation of D V^dagger, so
  // Gamma_d = realrep(D V^dagger) K^2 realrep(D V^dagger)^T / 2.
  const Eigen::MatrixXcd T = modes.D * set.V.adjoint();
  const Eigen::MatrixXd A = T.real();
  const Eigen::MatrixXd B = T.imag();
  const Eigen::VectorXd ep = (2.0 * eta_t * set.gains.array()).exp();
  const Eigen::VectorXd em = (-2.0 * eta_t * set.gains.array()).exp();
  const int m = modes.mode_count();
  const Eigen::MatrixXd AEp = A * ep.asDiagonal();
  const Eigen::MatrixXd AEm = A * em.asDiagonal();
  const Eigen::MatrixXd BEp = B * ep.asDiagonal();
  const Eigen::MatrixXd BEm = B * em.asDiagonal();
  CovarianceMatrix out;
  out.gamma.resize(2 * m, 2 * m);
  out.gamma.topLeftCorner(m, m) = 0.5 * (AEp * A.transpose() + BEm * B.transpose());
  out.gamma.topRightCorner(m, m) = 0.5 * (AEp * B.transpose() - BEm * A.transpose());
  out.gamma.bottomLeftCorner(m, m) = out.gamma.topRightCorner(m, m).transpose();
  out.gamma.bottomRightCorner(m, m) = 0.5 * (BEp * B.transpose() + AEm * A.transpose());
  return out;
}

NullifierModes nullifier_modes(const ModeMatrix& modes, const ClusterGraph& graph) {
  const int m = modes.mode_count();
  if (graph.size() != m) throw std::invalid_argument("nullifier_modes: graph size mismatch");
  NullifierModes nulls;
  nulls.r.resize(m);
  for (int j = 0; j < m; ++j) {
    nulls.r[j] = 1.0 / std::sqrt(1.0 + graph.neighbour_count(j));
  }
  nulls.W = -(nulls.r.asDiagonal() *
              ((kI * Eigen::MatrixXcd::Identity(m, m) + graph.G.cast<Complex>()) * modes.D));
  return nulls;
}

NullifierCovariance nullifier_covariance(const CovarianceMatrix& gamma_omega,
                                         const NullifierModes& nulls) {
  const Eigen::MatrixXd rw = real_quadrature_rep(nulls.W);
  if (rw.cols() != gamma_omega.gamma.rows()) {
    throw std::invalid_argument("nullifier_covariance: dimension mismatch");
  }
  const Eigen::MatrixXd full = rw * gamma_omega.gamma * rw.transpose();
  const int m = static_cast<int>(nulls.W.rows());
  NullifierCovariance out;
  out.dd = full.topLeftCorner(m, m);
  out.dz = full.topRightCorner(m, m);
  out.zz = full.bottomRightCorner(m, m);
  return out;
}

NullifierKernel::NullifierKernel(const ModeMatrix& frexels, const SupermodeSet& set,
                                 const ClusterGraph& graph)
    : m_(frexels.mode_count()),
      P_(frexels.D * set.V.adjoint()),
      graph_(graph.G),
      gains_(set.gains) {
  if (graph.size() != m_) throw std::invalid_argument("NullifierKernel: graph size mismatch");
  r_.resize(m_);
  for (int j = 0; j < m_; ++j) r_[j] = 1.0 / std::sqrt(1.0 + graph.neighbour_count(j));
}

Eigen::VectorXd NullifierKernel::variances(const std::vector<int>& perm,
                                           const Eigen::VectorXd& thetas, double eta_t) const {
  if (static_cast<int>(perm.size()) != m_ || thetas.size() != m_) {
    throw std::invalid_argument("NullifierKernel: bad assignment size");
  }
  Eigen::MatrixXcd phased(m_, P_.cols());
  for (int j = 0; j < m_; ++j) {
    phased.row(j) = std::polar(1.0, thetas[j]) * P_.row(perm[j]);
  }
  const Eigen::MatrixXcd T =
      -(r_.asDiagonal() *
        ((kI * Eigen::MatrixXcd::Identity(m_, m_) + graph_.cast<Complex>()) * phased));
  const Eigen::VectorXd ep = (2.0 * eta_t * gains_.array()).exp();
  const Eigen::VectorXd em = (-2.0 * eta_t * gains_.array()).exp();
  return 0.5 * (T.real().array().square().matrix() * ep +
                T.imag().array().square().matrix() * em);
}

double NullifierKernel::mean_variance(const std::vector<int>& perm,
                                      const Eigen::VectorXd& thetas, double eta_t) const {
  return variances(perm, thetas, eta_t).mean();
}

std::array<double, 5> NullifierKernel::coordinate_coefficients(const std::vector<int>& perm,
                                                               const Eigen::VectorXd& thetas,
                                                               double eta_t, int j) const {
  // The mean variance as a function of one phase is a trigonometric
  // polynomial a0 + a1 cos t + a2 sin t + a3 cos 2t + a4 sin 2t; five
  // equispaced samples recover the coefficients exactly.
  std::array<double, 5> f{};
  Eigen::VectorXd th = thetas;
  for (int k = 0; k < 5; ++k) {
    th[j] = kTwoPi * k / 5.0;
    f[k] = mean_variance(perm, th, eta_t);
  }
  std::array<double, 5> a{};
  for (int k = 0; k < 5; ++k) {
    const double t = kTwoPi * k / 5.0;
    a[0] += f[k] / 5.0;
    a[1] += 0.4 * f[k] * std::cos(t);
    a[2] += 0.4 * f[k] * std::sin(t);
    a[3] += 0.4 * f[k] * std::cos(2.0 * t);
    a[4] += 0.4 * f[k] * std::sin(2.0 * t);
  }
  return a;
}

namespace {

double trig_eval(const std::array<double, 5>& a, double t) {
  return a[0] + a[1] * std::cos(t) + a[2] * std::sin(t) + a[3] * std::cos(2.0 * t) +
         a[4] * std::sin(2.0 * t);
}

// 720-point scan over [0, 2pi) followed by safeguarded Newton. Improvements
// below a relative threshold are ignored so flat objectives keep t = 0.
double trig_minimize(const std::array<double, 5>& a) {
  double best_t = 0.0, best_v = trig_eval(a, 0.0);
  const double margin =
      1e-12 * (std::abs(a[0]) + std::abs(a[1]) + std::abs(a[2]) + std::abs(a[3]) +
               std::abs(a[4]));
  constexpr int kScan = 720;
  for (int i = 1; i < kScan; ++i) {
    const double t = kTwoPi * i / kScan;
    const double v = trig_eval(a, t);
    if (v < best_v - margin) { best_v = v; best_t = t; }
  }
  if (best_t == 0.0) return 0.0;
  const double window = kTwoPi / kScan;
  double t = best_t;
  for (int it = 0; it < 30; ++it) {
    const double d1 = -a[1] * std::sin(t) + a[2] * std::cos(t) -
                      2.0 * a[3] * std::sin(2.0 * t) + 2.0 * a[4] * std::cos(2.0 * t);
    const double d2 = -a[1] * std::cos(t) - a[2] * std::sin(t) -
                      4.0 * a[3] * std::cos(2.0 * t) - 4.0 * a[4] * std::sin(2.0 * t);
    if (d2 <= 0.0) break;
    const double step = d1 / d2;
    const double next = t - step;
    if (std::abs(next - best_t) > window) break;
    t = next;
    if (std::abs(step) < 1e-15) break;
  }
  return trig_eval(a, t) <= best_v ? t : best_t;
}

// Deterministic multistart grid: the full 8^m product grid while tractable,
// a Kronecker (low-discrepancy) sequence beyond that.
Eigen::MatrixXd phase_lattice(int m) {
  if (m <= 5) {
    const int per_axis = 8;
    int count = 1;
    for (int d = 0; d < m; ++d) count *= per_axis;
    Eigen::MatrixXd pts(count, m);
    for (int i = 0; i < count; ++i) {
      int rest = i;
      for (int d = 0; d < m; ++d) {
        pts(i, d) = kTwoPi * (rest % per_axis) / per_axis;
        rest /= per_axis;
      }
    }
    return pts;
  }
  static const double kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const int count = 16384;
  Eigen::MatrixXd pts(count, m);
  for (int i = 0; i < count; ++i) {
    for (int d = 0; d < m; ++d) {
      const double alpha = std::sqrt(kPrimes[d % 8]);
      double v = (i + 1) * alpha;
      pts(i, d) = kTwoPi * (v - std::floor(v));
    }
  }
  return pts;
}

}  // namespace

PhaseOptResult optimize_frexel_phases(const NullifierKernel& kernel,
                                      const std::vector<int>& perm, double eta_t) {
  const int m = kernel.band_count();
  constexpr int kStarts = 6;
  constexpr int kMaxSweeps = 8;

  const Eigen::MatrixXd lattice = phase_lattice(m);
  const int kLatticePoints = static_cast<int>(lattice.rows());
  std::vector<std::pair<double, int>> ranked(kLatticePoints + 1);
  ranked[0] = {kernel.mean_variance(perm, Eigen::VectorXd::Zero(m), eta_t), -1};
  for (int i = 0; i < kLatticePoints; ++i) {
    ranked[i + 1] = {kernel.mean_variance(perm, lattice.row(i).transpose(), eta_t), i};
  }
  std::stable_sort(ranked.begin(), ranked.end());

  PhaseOptResult best;
  best.mean_variance = std::numeric_limits<double>::infinity();
  for (int s = 0; s < kStarts && s < static_cast<int>(ranked.size()); ++s) {
    Eigen::VectorXd th = Eigen::VectorXd::Zero(m);
    if (ranked[s].second >= 0) th = lattice.row(ranked[s].second).transpose();
    double value = kernel.mean_variance(perm, th, eta_t);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      const double before = value;
      for (int j = 0; j < m; ++j) {
        const auto a = kernel.coordinate_coefficients(perm, th, eta_t, j);
        th[j] = trig_minimize(a);
        value = trig_eval(a, th[j]);
      }
      if (sweep >= 1 && before - value < 1e-15) break;
    }
    const double margin = 1e-12 * (std::abs(value) + 1.0);
    if (value < best.mean_variance - margin) {
      best.mean_variance = value;
      best.thetas = th;
    }
  }
  // Report phases in [0, 2pi).
  for (int j = 0; j < m; ++j) {
    best.thetas[j] = std::fmod(best.thetas[j], kTwoPi);
    if (best.thetas[j] < 0.0) best.thetas[j] += kTwoPi;
  }
  best.mean_variance = kernel.mean_variance(perm, best.thetas, eta_t);
  return best;
}

PermutationOptResult optimize_frexel_permutation(const NullifierKernel& kernel, double eta_t) {
  const int m = kernel.band_count();
  std::vector<std::vector<int>> perms;
  std::vector<int> base(m);
  std::iota(base.begin(), base.end(), 0);
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));

  std::vector<PhaseOptResult> results(perms.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(perms.size()); ++i) {
    results[i] = optimize_frexel_phases(kernel, perms[i], eta_t);
  }

  PermutationOptResult out;
  out.all_results.reserve(perms.size());
  int best_idx = 0;
  for (int i = 0; i < static_cast<int>(perms.size()); ++i) {
    out.all_results.emplace_back(perms[i], results[i].mean_variance);
    // Strict improvement keeps the lexicographically smallest permutation on
    // ties (enumeration is lexicographic).
    if (results[i].mean_variance < results[best_idx].mean_variance) best_idx = i;
  }
  out.perm = perms[best_idx];
  out.phases = results[best_idx];
  return out;
}

}  // namespace spdc
