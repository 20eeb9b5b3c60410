#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spdc/constants.hpp"

namespace spdc {

// Result of the Autonne-Takagi factorization V L V^T = diag(gains):
// V unitary, rows are the supermode spectral profiles, gains sorted
// descending and nonnegative. Every supermode is squeezed in the phase
// quadrature under this sign convention.
struct SupermodeSet {
  Eigen::MatrixXcd V;
  Eigen::VectorXd gains;
};

// Factorizes a complex symmetric matrix by congruence. Throws if the input
// is not symmetric to 1e-12 relative.
SupermodeSet takagi_factorize(const Eigen::MatrixXcd& L);

// Rephases rows of V so that diag(V L V^T) is real and nonnegative, then
// fixes the residual sign freedom deterministically. Gains are recomputed
// as |diag|.
SupermodeSet phase_normalize_supermodes(SupermodeSet set, const Eigen::MatrixXcd& L);

// Singular values of L (descending), without vectors. Cheaper route used by
// gain-only fitness evaluations.
Eigen::VectorXd singular_gains(const Eigen::MatrixXcd& L);

// Real 2Mx2N representation [[Re T, -Im T], [Im T, Re T]] acting on (q, p).
Eigen::MatrixXd real_quadrature_rep(const Eigen::MatrixXcd& T);

// Quadrature propagator S = R1 K R1^T with R1 the real representation of
// V^dagger and K = diag(e^{eta_t g}, e^{-eta_t g}). Symplectic and symmetric.
struct SymplecticPropagator {
  Eigen::MatrixXd S;
  double eta_t = 0.0;
};

SymplecticPropagator build_propagator(const SupermodeSet& set, double eta_t);

// 2M x 2M real quadrature covariance, (q_1..q_M, p_1..p_M) ordering,
// vacuum = I/2.
struct CovarianceMatrix {
  Eigen::MatrixXd gamma;

  static CovarianceMatrix vacuum(int modes);
};

// Gamma = S S^T / 2 (input state is vacuum).
CovarianceMatrix covariance_from_propagator(const SymplecticPropagator& prop);

// eta_t such that the leading supermode's squeezed-quadrature variance is
// 10^{-target_db/10} / 2.
double calibrate_gain_scale(const SupermodeSet& set, double target_db);

// -10 log10(variance / 0.5); positive means squeezed below shot noise.
double squeezing_db(double variance);

// Symplectic form [[0, I], [-I, 0]] in qqpp ordering.
Eigen::MatrixXd symplectic_form(int modes);

}  // namespace spdc
