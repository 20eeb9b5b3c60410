#include "spdc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace spdc {

namespace {

// mt19937_64 with fully specified mappings to uniform and normal doubles,
// so histories are reproducible bit for bit across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

Eigen::VectorXd clip(Eigen::VectorXd x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() == x.size()) x = x.cwiseMax(lo);
  if (hi.size() == x.size()) x = x.cwiseMin(hi);
  return x;
}

}  // namespace

EvoResult evolve(const Objective& objective, const EvoConfig& config, bool maximize,
                 const StopPredicate& stop_when) {
  const int n = config.dimension;
  if (n < 1) throw std::invalid_argument("evolve: dimension must be positive");
  if (!(config.initial_step > 0.0)) throw std::invalid_argument("evolve: step size must be positive");
  const int lambda = config.population > 0
                         ? config.population
                         : 4 + static_cast<int>(std::floor(3.0 * std::log(double(n))));
  const int mu = config.parents > 0 ? config.parents : lambda / 2;
  if (mu < 1 || mu > lambda) throw std::invalid_argument("evolve: parents must be in [1, population]");

  // Rank-based recombination weights.
  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) weights[i] = std::log(mu + 1.0) - std::log(i + 1.0);
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();

  // Adaptation rates (standard choices for rank-mu and path-length control).
  const double c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma;
  const double c_mu =
      std::min(0.99, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) * (n + 2.0) + mu_eff));
  const double chi_n = std::sqrt(double(n)) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  Rng rng(config.seed);
  Eigen::VectorXd mean = config.initial_point.size() == n ? config.initial_point
                                                          : Eigen::VectorXd::Zero(n);
  mean = clip(mean, config.lower_bounds, config.upper_bounds);
  double sigma = config.initial_step;
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd path = Eigen::VectorXd::Zero(n);

  EvoResult result;
  result.best_u = mean;
  result.best_value = objective(mean);
  result.evaluations = 1;
  if (!std::isfinite(result.best_value)) {
    throw std::runtime_error("evolve: objective not finite at the initial point");
  }

  const auto better = [maximize](double a, double b) { return maximize ? a > b : a < b; };

  std::vector<Eigen::VectorXd> xs(lambda);
  std::vector<double> fs(lambda);

  for (int gen = 0; gen < config.max_generations; ++gen) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    if (eig.info() != Eigen::Success) throw std::runtime_error("evolve: covariance eigensolver failed");
    const Eigen::VectorXd d = eig.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
    const Eigen::MatrixXd& B = eig.eigenvectors();

    auto sample = [&]() {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = rng.normal();
      return clip(mean + sigma * (B * d.cwiseProduct(z)), config.lower_bounds,
                  config.upper_bounds);
    };

    // All draws for the round happen before any evaluation; evaluations are
    // then independent. Non-finite values trigger a redraw of the offending
    // slots between rounds, which keeps the RNG stream schedule-independent.
    for (int i = 0; i < lambda; ++i) xs[i] = sample();
    std::vector<int> pending(lambda);
    std::iota(pending.begin(), pending.end(), 0);
    for (int round = 0; round <= config.max_resample_rounds && !pending.empty(); ++round) {
      if (round == config.max_resample_rounds) {
        throw std::runtime_error("evolve: objective kept returning non-finite values");
      }
#pragma omp parallel for schedule(dynamic)
      for (int pi = 0; pi < static_cast<int>(pending.size()); ++pi) {
        fs[pending[pi]] = objective(xs[pending[pi]]);
      }
      result.evaluations += static_cast<long>(pending.size());
      std::vector<int> still;
      for (int i : pending) {
        if (!std::isfinite(fs[i])) {
          still.push_back(i);
        }
      }
      for (int i : still) xs[i] = sample();
      pending.swap(still);
    }

    std::vector<int> order(lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return better(fs[a], fs[b]); });

    // Recombine the best half, then blend with the previous mean.
    Eigen::VectorXd recombined = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mu; ++i) recombined += weights[i] * xs[order[i]];
    const Eigen::VectorXd old_mean = mean;
    mean = (1.0 - config.history_blend) * recombined + config.history_blend * old_mean;

    // Path length control: correlated consecutive steps lengthen the path
    // and raise sigma, decorrelated steps shorten it and shrink sigma.
    const Eigen::VectorXd delta = (mean - old_mean) / sigma;
    const Eigen::VectorXd whitened = B * (B.transpose() * delta).cwiseQuotient(d);
    path = (1.0 - c_sigma) * path + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * whitened;
    sigma *= std::exp((c_sigma / d_sigma) * (path.norm() / chi_n - 1.0));
    sigma = std::clamp(sigma, 1e-16, 1e6);

    // Rank-mu covariance update along the selected steps.
    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd y = (xs[order[i]] - old_mean) / sigma;
      rank_mu.noalias() += weights[i] * y * y.transpose();
    }
    C = (1.0 - c_mu) * C + c_mu * rank_mu;
    C = 0.5 * (C + C.transpose());

    const int gen_best = order[0];
    if (better(fs[gen_best], result.best_value)) {
      result.best_value = fs[gen_best];
      result.best_u = xs[gen_best];
    }

    GenerationRecord rec;
    rec.generation = gen;
    rec.best = fs[gen_best];
    rec.mean = std::accumulate(fs.begin(), fs.end(), 0.0) / lambda;
    rec.step_size = sigma;
    rec.best_so_far = result.best_value;
    result.history.push_back(rec);

    if (stop_when && stop_when(result.best_u, result.best_value)) break;
  }
  return result;
}

double fitness_flatten(const Eigen::VectorXd& gains, int k) {
  if (gains.size() == 0 || !(gains[0] > 0.0)) {
    throw std::invalid_argument("fitness_flatten: leading gain must be positive");
  }
  if (k < 1 || k > gains.size()) throw std::invalid_argument("fitness_flatten: bad k");
  return gains.head(k).sum() / gains[0];
}

double penalty_shape_inverse_power(double w) {
  const double x = 5.0 * w;
  return 1.0 / (x * x * x * x * x * x);
}

double fitness_flatten_penalized(const Eigen::VectorXd& gains, int k, double a, double w) {
  return fitness_flatten(gains, k) - a * penalty_shape_inverse_power(w);
}

double fitness_gap(const Eigen::VectorXd& gains) {
  if (gains.size() < 2 || !(gains[1] > 0.0)) {
    throw std::invalid_argument("fitness_gap: second gain must be positive");
  }
  return gains[0] / gains[1];
}

double fitness_gap_penalized(const Eigen::VectorXd& gains, double b, double w) {
  return fitness_gap(gains) - b * penalty_shape_inverse_power(w);
}

double fitness_nullifier(const Eigen::MatrixXd& gamma_dd) {
  return gamma_dd.trace();
}

double fitness_nullifier_penalized(double trace, double h, double w) {
  return trace - h * w;
}

}  // namespace spdc
