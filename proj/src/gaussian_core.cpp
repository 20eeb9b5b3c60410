#include "spdc/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace spdc {

namespace {

using Complex = std::complex<double>;

// Hermite-Gauss profiles used to order supermodes inside degenerate gain
// clusters; the reference width is arbitrary but fixed, which is all the
// tie-break needs.
Eigen::VectorXd hermite_gauss(int order, int n) {
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, -4.0, 4.0);
  Eigen::VectorXd h_prev = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd h = 2.0 * x;
  if (order == 0) h = h_prev;
  for (int m = 2; m <= order; ++m) {
    Eigen::VectorXd h_next = 2.0 * x.cwiseProduct(h) - 2.0 * (m - 1) * h_prev;
    h_prev = h;
    h = h_next;
  }
  Eigen::VectorXd psi = h.cwiseProduct((-0.5 * x.array().square()).exp().matrix());
  return psi / psi.norm();
}

// Reorders members of each near-degenerate gain cluster by descending
// overlap with low-order Hermite-Gauss profiles (lexicographic). Clusters of
// negligible gain are left in eigensolver order; their gauge has no physical
// content and large tail clusters would make the probing quadratic.
void stabilize_degenerate_clusters(SupermodeSet& set) {
  constexpr int kMaxClusterSize = 12;
  const int n = static_cast<int>(set.gains.size());
  if (n < 2) return;
  const double scale = std::max(set.gains[0], 1e-300);
  int start = 0;
  while (start < n - 1) {
    int end = start;
    while (end + 1 < n && set.gains[start] - set.gains[end + 1] < 1e-9 * scale) ++end;
    const int size = end - start + 1;
    if (size > 1 && size <= kMaxClusterSize && set.gains[start] > 1e-6 * scale) {
      const int n_probe = std::min(size + 2, n);
      std::vector<Eigen::VectorXcd> probes(n_probe);
      for (int m = 0; m < n_probe; ++m) {
        probes[m] = hermite_gauss(m, static_cast<int>(set.V.cols())).cast<Complex>();
      }
      std::vector<std::vector<double>> scores(size);
      for (int i = 0; i < size; ++i) {
        scores[i].resize(n_probe);
        for (int m = 0; m < n_probe; ++m) {
          scores[i][m] = std::abs(set.V.row(start + i).conjugate().dot(probes[m]));
        }
      }
      std::vector<int> order(size);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scores[a] > scores[b];  // lexicographic, descending
      });
      Eigen::MatrixXcd block(size, set.V.cols());
      Eigen::VectorXd g(size);
      for (int i = 0; i < size; ++i) {
        block.row(i) = set.V.row(start + order[i]);
        g[i] = set.gains[start + order[i]];
      }
      set.V.middleRows(start, size) = block;
      set.gains.segment(start, size) = g;
    }
    start = end + 1;
  }
}

// Deterministic sign gauge: the entry of largest magnitude in each row gets
// a nonnegative real part (positive imaginary part on ties near the axis).
void fix_row_signs(Eigen::MatrixXcd& V) {
  for (Eigen::Index r = 0; r < V.rows(); ++r) {
    Eigen::Index peak = 0;
    double best = -1.0;
    for (Eigen::Index c = 0; c < V.cols(); ++c) {
      const double a = std::norm(V(r, c));
      if (a > best) { best = a; peak = c; }
    }
    const Complex v = V(r, peak);
    if (v.real() < 0.0 || (std::abs(v.real()) < 1e-14 * std::abs(v) && v.imag() < 0.0)) {
      V.row(r) *= -1.0;
    }
  }
}

}  // namespace

SupermodeSet takagi_factorize(const Eigen::MatrixXcd& L) {
  const int n = static_cast<int>(L.rows());
  if (L.cols() != n) throw std::invalid_argument("takagi_factorize: matrix not square");
  const double norm = L.norm();
  if ((L - L.transpose()).norm() > 1e-12 * std::max(norm, 1e-300)) {
    throw std::invalid_argument("takagi_factorize: matrix not symmetric");
  }

  // Real symmetric embedding: M [x; y] = s [x; y] is equivalent to
  // L conj(u) = s u with u = x + i y. Eigenvalues come in +-s pairs; the
  // eigenvectors of the strictly positive half give complex-orthonormal
  // Takagi vectors (L = U diag(s) U^T with U = [u_1 .. u_n]), degenerate
  // clusters included. Only the kernel needs re-orthonormalization, because
  // u and i u are real-orthogonal embeddings of the same complex direction.
  Eigen::MatrixXd M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = L.real();
  M.topRightCorner(n, n) = L.imag();
  M.bottomLeftCorner(n, n) = L.imag();
  M.bottomRightCorner(n, n) = -L.real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("takagi_factorize: eigensolver failed");
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();

  const auto complex_image = [&](int col) {
    return Eigen::VectorXcd(evecs.col(col).head(n).cast<Complex>() +
                            Complex(0.0, 1.0) * evecs.col(col).tail(n).cast<Complex>());
  };

  SupermodeSet set;
  set.V.resize(n, n);
  set.gains.resize(n);
  const double zero_tol = 1e-13 * std::max(norm, 1e-300);

  int filled = 0;
  for (int i = 2 * n - 1; i >= 0 && filled < n; --i) {
    if (evals[i] <= zero_tol) break;
    set.gains[filled] = evals[i];
    set.V.row(filled) = complex_image(i).adjoint();  // V = U^dagger
    ++filled;
  }

  if (filled < n) {
    // Candidates spanning the kernel: complex images of every eigenvector
    // with |eigenvalue| <= tol, then canonical basis vectors as a fallback.
    std::vector<Eigen::VectorXcd> candidates;
    for (int i = 0; i < 2 * n; ++i) {
      if (std::abs(evals[i]) <= zero_tol) candidates.push_back(complex_image(i));
    }
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
      e[i] = 1.0;
      candidates.push_back(e);
    }
    for (const Eigen::VectorXcd& cand : candidates) {
      if (filled == n) break;
      Eigen::VectorXcd u = cand;
      for (int r = 0; r < filled; ++r) {
        const Eigen::VectorXcd ur = set.V.row(r).adjoint();  // u_r as a column
        u -= ur.dot(u) * ur;
      }
      const double len = u.norm();
      if (len > 1e-8) {
        set.gains[filled] = 0.0;
        set.V.row(filled) = (u / len).adjoint();
        ++filled;
      }
    }
    if (filled < n) throw std::runtime_error("takagi_factorize: kernel basis incomplete");
  }

  // Near-degenerate singular-value pairs leave the embedding eigenvectors
  // complex-orthonormal only to eps/gap. A QR pass restores unitarity; the
  // induced mixing between gains with gap delta is O(eps/delta) and enters
  // the congruence diagonal as O(eps), so the residual is unaffected.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(set.V.adjoint().eval());
  set.V = Eigen::MatrixXcd(qr.householderQ()).adjoint();

  stabilize_degenerate_clusters(set);
  return phase_normalize_supermodes(std::move(set), L);
}

SupermodeSet phase_normalize_supermodes(SupermodeSet set, const Eigen::MatrixXcd& L) {
  const Eigen::VectorXcd diag = (set.V * L * set.V.transpose()).diagonal();
  for (Eigen::Index r = 0; r < set.V.rows(); ++r) {
    const double mag = std::abs(diag[r]);
    if (mag > 0.0) {
      // Row phased by e^{i phi} scales the diagonal by e^{2 i phi}.
      const double phi = -0.5 * std::arg(diag[r]);
      set.V.row(r) *= Complex(std::cos(phi), std::sin(phi));
      set.gains[r] = mag;
    }
  }
  fix_row_signs(set.V);
  return set;
}

Eigen::VectorXd singular_gains(const Eigen::MatrixXcd& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(L * L.adjoint(),
                                                         Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return ev.reverse();
}

Eigen::MatrixXd real_quadrature_rep(const Eigen::MatrixXcd& T) {
  const Eigen::Index m = T.rows();
  const Eigen::Index n = T.cols();
  Eigen::MatrixXd R(2 * m, 2 * n);
  R.topLeftCorner(m, n) = T.real();
  R.topRightCorner(m, n) = -T.imag();
  R.bottomLeftCorner(m, n) = T.imag();
  R.bottomRightCorner(m, n) = T.real();
  return R;
}

SymplecticPropagator build_propagator(const SupermodeSet& set, double eta_t) {
  if (!std::isfinite(eta_t)) throw std::invalid_argument("build_propagator: eta_t not finite");
  const int n = static_cast<int>(set.gains.size());
  const Eigen::MatrixXcd A = set.V.adjoint();  // complex matrix behind R1
  const Eigen::ArrayXd ep = (eta_t * set.gains.array()).exp();
  const Eigen::ArrayXd em = (-eta_t * set.gains.array()).exp();

  // S = R1 diag(ep, em) R1^T expanded in blocks of A = Re(A) + i Im(A).
  const Eigen::MatrixXd Ar = A.real();
  const Eigen::MatrixXd Ai = A.imag();
  const Eigen::MatrixXd ArEp = Ar * ep.matrix().asDiagonal();
  const Eigen::MatrixXd ArEm = Ar * em.matrix().asDiagonal();
  const Eigen::MatrixXd AiEp = Ai * ep.matrix().asDiagonal();
  const Eigen::MatrixXd AiEm = Ai * em.matrix().asDiagonal();

  SymplecticPropagator prop;
  prop.eta_t = eta_t;
  prop.S.resize(2 * n, 2 * n);
  prop.S.topLeftCorner(n, n) = ArEp * Ar.transpose() + AiEm * Ai.transpose();
  prop.S.topRightCorner(n, n) = ArEp * Ai.transpose() - AiEm * Ar.transpose();
  prop.S.bottomLeftCorner(n, n) = AiEp * Ar.transpose() - ArEm * Ai.transpose();
  prop.S.bottomRightCorner(n, n) = AiEp * Ai.transpose() + ArEm * Ar.transpose();
  return prop;
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
  CovarianceMatrix cov;
  cov.gamma = 0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  return cov;
}

CovarianceMatrix covariance_from_propagator(const SymplecticPropagator& prop) {
  CovarianceMatrix cov;
  cov.gamma = 0.5 * prop.S * prop.S.transpose();
  return cov;
}

double calibrate_gain_scale(const SupermodeSet& set, double target_db) {
  if (set.gains.size() == 0 || set.gains[0] <= 0.0) {
    throw std::invalid_argument("calibrate_gain_scale: no parametric gain");
  }
  return target_db * std::log(10.0) / (20.0 * set.gains[0]);
}

double squeezing_db(double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("squeezing_db: variance must be positive");
  return -10.0 * std::log10(variance / kVacuumVariance);
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes) = Eigen::MatrixXd::Identity(modes, modes);
  omega.bottomLeftCorner(modes, modes) = -Eigen::MatrixXd::Identity(modes, modes);
  return omega;
}

}  // namespace spdc
