#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "spdc/gaussian_core.hpp"
#include "spdc/pump.hpp"

namespace spdc {

// M x N detection-mode matrix with orthonormal rows (D D^dagger = I).
struct ModeMatrix {
  Eigen::MatrixXcd D;

  int mode_count() const { return static_cast<int>(D.rows()); }
};

// Unit-weight cluster graph: symmetric 0/1 adjacency with zero diagonal.
struct ClusterGraph {
  Eigen::MatrixXd G;

  static ClusterGraph linear(int m);
  static ClusterGraph from_edges(int m, const std::vector<std::pair<int, int>>& edges);

  int size() const { return static_cast<int>(G.rows()); }
  int neighbour_count(int j) const { return static_cast<int>(G.row(j).sum() + 0.5); }
};

// Frequency-band slices of a Gaussian pulse.
struct FrexelSpec {
  Eigen::VectorXd band_edges;  // m+1 strictly increasing, rad/s
  Eigen::VectorXd thetas;      // m phases
  double envelope_center_wavelength = 795e-9;
  double envelope_fwhm = 10e-9;

  int band_count() const { return static_cast<int>(band_edges.size()) - 1; }

  // m bands spanning [2 pi c / lambda_red, 2 pi c / lambda_blue], edges
  // uniform in angular frequency, all phases zero.
  static FrexelSpec uniform(int m, double lambda_red = 808e-9, double lambda_blue = 782e-9);
};

ModeMatrix build_frexels(const FrexelSpec& spec, const FrequencyGrid& grid);

// R_D = [[Re D, -Im D], [Im D, Re D]]; throws unless D D^dagger = I to 1e-10.
Eigen::MatrixXd quadrature_transform(const ModeMatrix& modes);

// Gamma_d = R_D Gamma_omega R_D^T.
CovarianceMatrix mode_covariance(const CovarianceMatrix& gamma_omega, const ModeMatrix& modes);

// Fast equivalent built directly from the supermode decomposition,
// Gamma_d = R_{D V^dagger} K^2 R_{D V^dagger}^T / 2.
CovarianceMatrix mode_covariance(const SupermodeSet& set, double eta_t, const ModeMatrix& modes);

// Modes whose amplitude quadratures are the normalized nullifiers
// delta_j = r_j (p_j - sum_k G_jk q_k), r_j = 1/sqrt(1 + N(j)).
struct NullifierModes {
  Eigen::MatrixXcd W;  // W = -diag(r) (i I + G) D
  Eigen::VectorXd r;
};

NullifierModes nullifier_modes(const ModeMatrix& modes, const ClusterGraph& graph);

// Blocks of R_W Gamma_omega R_W^T; diag(dd) are the nullifier variances.
struct NullifierCovariance {
  Eigen::MatrixXd dd, dz, zz;

  Eigen::VectorXd variances() const { return dd.diagonal(); }
};

NullifierCovariance nullifier_covariance(const CovarianceMatrix& gamma_omega,
                                         const NullifierModes& nulls);

// Precomputed state for repeated nullifier-variance evaluations over frexel
// phases, permutations and gain scales: caches P = D V^dagger once so each
// evaluation costs O(M^2 N).
class NullifierKernel {
 public:
  NullifierKernel(const ModeMatrix& frexels, const SupermodeSet& set,
                  const ClusterGraph& graph);

  int band_count() const { return m_; }

  // Variances of the normalized nullifiers for frexel assignment
  // node j <- frexel perm[j], with per-node phases thetas.
  Eigen::VectorXd variances(const std::vector<int>& perm, const Eigen::VectorXd& thetas,
                            double eta_t) const;
  double mean_variance(const std::vector<int>& perm, const Eigen::VectorXd& thetas,
                       double eta_t) const;

  // Coefficients of the per-coordinate objective
  // f(t) = c0 + c1 cos t + c2 sin t + c3 cos 2t + c4 sin 2t
  // obtained by varying thetas[j] only.
  std::array<double, 5> coordinate_coefficients(const std::vector<int>& perm,
                                                const Eigen::VectorXd& thetas, double eta_t,
                                                int j) const;

 private:
  int m_ = 0;
  Eigen::MatrixXcd P_;      // frexels x supermodes overlap, D0 V^dagger
  Eigen::MatrixXd graph_;
  Eigen::VectorXd r_;
  Eigen::VectorXd gains_;
};

struct PhaseOptResult {
  Eigen::VectorXd thetas;
  double mean_variance = 0.0;
};

// Minimizes the mean nullifier variance over all band phases. Deterministic:
// low-discrepancy multistart, then coordinate descent with 720-point scans
// and a Newton polish per coordinate.
PhaseOptResult optimize_frexel_phases(const NullifierKernel& kernel,
                                      const std::vector<int>& perm, double eta_t);

struct PermutationOptResult {
  std::vector<int> perm;
  PhaseOptResult phases;
  std::vector<std::pair<std::vector<int>, double>> all_results;  // enumeration order
};

// Exhaustive search over all m! assignments, each with inner phase
// optimization; ties resolved toward the lexicographically smallest
// permutation.
PermutationOptResult optimize_frexel_permutation(const NullifierKernel& kernel, double eta_t);

}  // namespace spdc
