#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "spdc/dispersion.hpp"
#include "spdc/jsa.hpp"
#include "spdc/modes.hpp"

using namespace spdc;
using Complex = std::complex<double>;

namespace {

constexpr double kLambdaPump = 397.5e-9;
constexpr double kFwhm = 3.54e-9;
const SellmeierCoefficients kBibo = SellmeierCoefficients::bibo();

FrequencyGrid default_grid(int n) {
  const double sigma = gaussian_sigma_omega(kFwhm, kLambdaPump);
  return build_grid(2.0 * kLambdaPump, 8.0, sigma, n);
}

SupermodeSet pipeline_supermodes(const FrequencyGrid& grid, double length) {
  CrystalConfig crystal;
  crystal.length = length;
  crystal.pump_central_wavelength = kLambdaPump;
  crystal.theta = solve_phase_matching_angle(kLambdaPump, kBibo);
  const PumpProfile pump = gaussian_pump(grid, kFwhm, kLambdaPump);
  return takagi_factorize(build_jsa(grid, pump, crystal, kBibo).L);
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = Complex(normal(rng), normal(rng));
  }
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
}

ClusterGraph random_graph(int m, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (rng() % 2 == 0) edges.emplace_back(a, b);
    }
  }
  return ClusterGraph::from_edges(m, edges);
}

}  // namespace

TEST_CASE("quadrature transform of simple mode matrices") {
  ModeMatrix eye{Eigen::MatrixXcd::Identity(3, 3)};
  CHECK((quadrature_transform(eye) - Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);

  ModeMatrix rotated{Complex(0.0, 1.0) * Eigen::MatrixXcd::Identity(2, 2)};
  const Eigen::MatrixXd r = quadrature_transform(rotated);
  Eigen::MatrixXd expected(4, 4);
  expected << 0, 0, -1, 0,
              0, 0, 0, -1,
              1, 0, 0, 0,
              0, 1, 0, 0;
  CHECK((r - expected).norm() == 0.0);

  std::mt19937_64 rng(1);
  ModeMatrix unitary{random_unitary(6, rng)};
  const Eigen::MatrixXd ru = quadrature_transform(unitary);
  CHECK((ru * ru.transpose() - Eigen::MatrixXd::Identity(12, 12)).norm() < 1e-12);
}

TEST_CASE("quadrature transform rejects non-orthonormal rows") {
  Eigen::MatrixXcd d(2, 3);
  d.setOnes();
  CHECK_THROWS_AS(quadrature_transform(ModeMatrix{d}), std::invalid_argument);
}

TEST_CASE("mode covariance of vacuum is vacuum") {
  const CovarianceMatrix vac = CovarianceMatrix::vacuum(5);
  ModeMatrix eye{Eigen::MatrixXcd::Identity(5, 5)};
  CHECK((mode_covariance(vac, eye).gamma - vac.gamma).norm() == 0.0);

  // Any two orthonormal rows of vacuum give a two-mode vacuum block.
  std::mt19937_64 rng(2);
  ModeMatrix two{random_unitary(5, rng).topRows(2)};
  CHECK((mode_covariance(vac, two).gamma - CovarianceMatrix::vacuum(2).gamma).norm() < 1e-12);
}

TEST_CASE("supermode-route covariance equals the dense reference") {
  const FrequencyGrid grid = default_grid(61);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const double eta_t = calibrate_gain_scale(set, 6.0);
  const CovarianceMatrix gamma = covariance_from_propagator(build_propagator(set, eta_t));

  std::mt19937_64 rng(3);
  ModeMatrix modes{random_unitary(grid.size(), rng).topRows(3)};
  const CovarianceMatrix slow = mode_covariance(gamma, modes);
  const CovarianceMatrix fast = mode_covariance(set, eta_t, modes);
  CHECK((slow.gamma - fast.gamma).norm() < 1e-9 * slow.gamma.norm());
}

TEST_CASE("leading supermode reaches the calibrated squeezing") {
  const FrequencyGrid grid = default_grid(81);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const double eta_t = calibrate_gain_scale(set, 7.0);
  ModeMatrix leading{set.V.topRows(1)};
  const CovarianceMatrix cov = mode_covariance(set, eta_t, leading);
  CHECK(cov.gamma(1, 1) == doctest::Approx(0.5 * std::pow(10.0, -0.7)).epsilon(1e-9));
  CHECK(squeezing_db(cov.gamma(1, 1)) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("frexel construction: single band is the normalized envelope") {
  const FrequencyGrid grid = default_grid(101);
  FrexelSpec spec;
  spec.band_edges = Eigen::VectorXd::LinSpaced(2, grid.omegas[0], grid.omegas[grid.size() - 1]);
  spec.thetas = Eigen::VectorXd::Zero(1);
  const ModeMatrix modes = build_frexels(spec, grid);
  CHECK(modes.D.row(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
  // Proportional to the Gaussian envelope at every point.
  const double w_c = omega_from_wavelength(spec.envelope_center_wavelength);
  const double sigma = gaussian_sigma_omega(spec.envelope_fwhm, spec.envelope_center_wavelength);
  const double scale = std::abs(modes.D(0, 50)) /
                       std::exp(-std::pow(grid.omegas[50] - w_c, 2) / (4.0 * sigma * sigma));
  for (int l = 0; l < grid.size(); ++l) {
    const double env = std::exp(-std::pow(grid.omegas[l] - w_c, 2) / (4.0 * sigma * sigma));
    CHECK(std::abs(modes.D(0, l)) == doctest::Approx(scale * env).epsilon(1e-9));
  }
}

TEST_CASE("four paper frexels are orthonormal with disjoint supports") {
  const FrequencyGrid grid = default_grid(501);
  FrexelSpec spec = FrexelSpec::uniform(4);
  spec.thetas << 0.3, 1.0, -0.4, 2.0;
  const ModeMatrix modes = build_frexels(spec, grid);
  CHECK((modes.D * modes.D.adjoint() - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-10);
  for (int l = 0; l < grid.size(); ++l) {
    int support = 0;
    for (int j = 0; j < 4; ++j) {
      if (std::abs(modes.D(j, l)) > 0.0) ++support;
    }
    CHECK(support <= 1);
  }
}

TEST_CASE("empty frexel band is rejected") {
  const FrequencyGrid grid = default_grid(51);
  FrexelSpec spec;
  spec.band_edges.resize(3);
  // Second band falls between two grid points.
  spec.band_edges << grid.omegas[0], grid.omegas[20] + grid.spacing() * 0.2,
      grid.omegas[20] + grid.spacing() * 0.8;
  spec.thetas = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(build_frexels(spec, grid), std::invalid_argument);
}

TEST_CASE("nullifier normalizations follow the neighbour counts") {
  const ClusterGraph g0 = ClusterGraph::from_edges(3, {});
  ModeMatrix eye{Eigen::MatrixXcd::Identity(3, 3)};
  const NullifierModes n0 = nullifier_modes(eye, g0);
  CHECK((n0.r - Eigen::VectorXd::Ones(3)).norm() == 0.0);
  // With no neighbours the nullifier is the phase quadrature: W = -i D.
  CHECK((n0.W - Complex(0.0, -1.0) * Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);

  const ClusterGraph pair = ClusterGraph::from_edges(2, {{0, 1}});
  ModeMatrix eye2{Eigen::MatrixXcd::Identity(2, 2)};
  const NullifierModes n2 = nullifier_modes(eye2, pair);
  CHECK(n2.r[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(n2.r[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  const ClusterGraph line = ClusterGraph::linear(4);
  ModeMatrix eye4{Eigen::MatrixXcd::Identity(4, 4)};
  const NullifierModes n4 = nullifier_modes(eye4, line);
  CHECK(n4.r[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(n4.r[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(n4.r[2] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(n4.r[3] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("nullifier rows have unit norm and vacuum variance one half") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);  // up to 6
    const int n = m + 4;
    ModeMatrix modes{random_unitary(n, rng).topRows(m)};
    const ClusterGraph graph = random_graph(m, rng);
    const NullifierModes nulls = nullifier_modes(modes, graph);
    for (int j = 0; j < m; ++j) {
      CHECK(nulls.W.row(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    const NullifierCovariance cov = nullifier_covariance(CovarianceMatrix::vacuum(n), nulls);
    for (int j = 0; j < m; ++j) {
      CHECK(cov.dd(j, j) == doctest::Approx(0.5).epsilon(1e-12));
    }
    // Positive semidefinite nullifier block.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.dd);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("kernel variances equal the dense covariance route") {
  const FrequencyGrid grid = default_grid(121);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const double eta_t = calibrate_gain_scale(set, 7.0);
  const CovarianceMatrix gamma = covariance_from_propagator(build_propagator(set, eta_t));

  const ModeMatrix frexels = build_frexels(FrexelSpec::uniform(4), grid);
  const ClusterGraph graph = ClusterGraph::linear(4);
  const NullifierKernel kernel(frexels, set, graph);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<int> perm{2, 0, 3, 1};
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd thetas(4);
    for (int j = 0; j < 4; ++j) thetas[j] = angle(rng);

    // Dense reference: permuted, phased frexels through the full 2N x 2N
    // covariance.
    Eigen::MatrixXcd d(4, grid.size());
    for (int j = 0; j < 4; ++j) {
      d.row(j) = std::polar(1.0, thetas[j]) * frexels.D.row(perm[j]);
    }
    const NullifierModes nulls = nullifier_modes(ModeMatrix{d}, graph);
    const NullifierCovariance reference = nullifier_covariance(gamma, nulls);

    const Eigen::VectorXd fast = kernel.variances(perm, thetas, eta_t);
    CHECK((fast - reference.dd.diagonal()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("coordinate coefficients reproduce the objective everywhere") {
  const FrequencyGrid grid = default_grid(81);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const double eta_t = calibrate_gain_scale(set, 7.0);
  const ModeMatrix frexels = build_frexels(FrexelSpec::uniform(4), grid);
  const NullifierKernel kernel(frexels, set, ClusterGraph::linear(4));

  std::vector<int> perm{0, 3, 1, 2};
  Eigen::VectorXd thetas(4);
  thetas << 0.5, 1.7, 2.9, 4.4;
  for (int j = 0; j < 4; ++j) {
    const auto a = kernel.coordinate_coefficients(perm, thetas, eta_t, j);
    for (double t : {0.123, 1.9, 3.7, 5.5}) {
      Eigen::VectorXd probe = thetas;
      probe[j] = t;
      const double direct = kernel.mean_variance(perm, probe, eta_t);
      const double predicted = a[0] + a[1] * std::cos(t) + a[2] * std::sin(t) +
                               a[3] * std::cos(2.0 * t) + a[4] * std::sin(2.0 * t);
      CHECK(predicted == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("phase optimization on vacuum is flat and returns zero phases") {
  // eta_t = 0 gives the vacuum state for any supermode set.
  const FrequencyGrid grid = default_grid(61);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const ModeMatrix frexels = build_frexels(FrexelSpec::uniform(4), grid);
  const NullifierKernel kernel(frexels, set, ClusterGraph::linear(4));
  const PhaseOptResult result = optimize_frexel_phases(kernel, {0, 1, 2, 3}, 0.0);
  CHECK(result.mean_variance == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.thetas.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-mode phase optimization finds the squeezed quadrature") {
  // One frexel covering the grid, no neighbours: the nullifier is the phase
  // quadrature of the band mode; the optimal theta rotates onto the most
  // squeezed quadrature available. Compare against a dense scan.
  const FrequencyGrid grid = default_grid(81);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const double eta_t = calibrate_gain_scale(set, 7.0);
  FrexelSpec spec;
  spec.band_edges = Eigen::VectorXd::LinSpaced(2, grid.omegas[0], grid.omegas[grid.size() - 1]);
  spec.thetas = Eigen::VectorXd::Zero(1);
  const ModeMatrix modes = build_frexels(spec, grid);
  const NullifierKernel kernel(modes, set, ClusterGraph::from_edges(1, {}));

  const PhaseOptResult result = optimize_frexel_phases(kernel, {0}, eta_t);
  double best_scan = 1e300;
  for (int i = 0; i < 100000; ++i) {
    Eigen::VectorXd th(1);
    th[0] = kTwoPi * i / 100000.0;
    best_scan = std::min(best_scan, kernel.mean_variance({0}, th, eta_t));
  }
  CHECK(result.mean_variance <= best_scan + 1e-12);
  CHECK(result.mean_variance < 0.5);
}

TEST_CASE("graph-automorphic assignments give identical optimized noise") {
  const FrequencyGrid grid = default_grid(161);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const double eta_t = calibrate_gain_scale(set, 7.0);
  const ModeMatrix frexels = build_frexels(FrexelSpec::uniform(4), grid);
  const NullifierKernel kernel(frexels, set, ClusterGraph::linear(4));
  // Reversing the linear graph is an automorphism, so sigma and its
  // reversal are physically identical assignments.
  const PhaseOptResult a = optimize_frexel_phases(kernel, {0, 3, 1, 2}, eta_t);
  const PhaseOptResult b = optimize_frexel_phases(kernel, {2, 1, 3, 0}, eta_t);
  CHECK(a.mean_variance == doctest::Approx(b.mean_variance).epsilon(1e-9));
}

TEST_CASE("permutation search: single band returns the identity") {
  const FrequencyGrid grid = default_grid(41);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  FrexelSpec spec;
  spec.band_edges = Eigen::VectorXd::LinSpaced(2, grid.omegas[0], grid.omegas[grid.size() - 1]);
  spec.thetas = Eigen::VectorXd::Zero(1);
  const NullifierKernel kernel(build_frexels(spec, grid), set, ClusterGraph::from_edges(1, {}));
  const PermutationOptResult result = optimize_frexel_permutation(kernel, 0.3);
  CHECK(result.perm == std::vector<int>{0});
}

TEST_CASE("permutation search on vacuum ties and keeps the identity") {
  const FrequencyGrid grid = default_grid(61);
  const SupermodeSet set = pipeline_supermodes(grid, 0.5e-3);
  const ModeMatrix frexels = build_frexels(FrexelSpec::uniform(3), grid);
  const NullifierKernel kernel(frexels, set, ClusterGraph::linear(3));
  const PermutationOptResult result = optimize_frexel_permutation(kernel, 0.0);
  CHECK(result.perm == std::vector<int>{0, 1, 2});
  CHECK(result.phases.mean_variance == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.all_results.size() == 6);
}
