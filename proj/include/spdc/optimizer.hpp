#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace spdc {

// Derivative-free evolution strategy: rank-weighted recombination of the
// best half of each generation, history blending of the incumbent mean,
// rank-mu covariance adaptation (stretching the fast-ascent axes) and
// cumulative path length control of the global step size.
struct EvoConfig {
  int dimension = 0;
  int population = 0;       // 0 -> 4 + floor(3 ln n)
  int parents = 0;          // 0 -> population / 2
  double initial_step = 0.3;
  int max_generations = 200;
  std::uint64_t seed = 1;
  double history_blend = 0.3;  // weight of the previous mean in the update
  Eigen::VectorXd initial_point;           // size 0 -> origin
  Eigen::VectorXd lower_bounds, upper_bounds;  // size 0 -> unconstrained
  int max_resample_rounds = 16;
};

struct GenerationRecord {
  int generation = 0;
  double best = 0.0;       // best objective value in the generation
  double mean = 0.0;       // mean objective value over the generation
  double step_size = 0.0;
  double best_so_far = 0.0;
};

struct EvoResult {
  Eigen::VectorXd best_u;
  double best_value = 0.0;
  std::vector<GenerationRecord> history;
  long evaluations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using StopPredicate = std::function<bool(const Eigen::VectorXd& best_u, double best_value)>;

// Deterministic for a fixed seed/config/objective; all random draws of a
// generation happen before any objective evaluation, so mutants may be
// evaluated concurrently. Throws if the objective keeps returning
// non-finite values after bounded resampling.
EvoResult evolve(const Objective& objective, const EvoConfig& config, bool maximize,
                 const StopPredicate& stop_when = nullptr);

// --- fitness library ----------------------------------------------------

// f1 = sum_{j<=k} g_j / g_1 for gains sorted descending; in [1, k].
double fitness_flatten(const Eigen::VectorXd& gains, int k);

// Default penalty shape x(w) = 1/(5 w)^6: negligible above w ~ 0.2, steep
// below it.
double penalty_shape_inverse_power(double w);

// f1 minus a * x(w); the penalty is subtracted because the fitness is
// maximized and low shaped-pump power must be disfavoured.
double fitness_flatten_penalized(const Eigen::VectorXd& gains, int k, double a, double w);

// f2 = g_1 / g_2.
double fitness_gap(const Eigen::VectorXd& gains);
double fitness_gap_penalized(const Eigen::VectorXd& gains, double b, double w);

// f3 = Tr[Gamma_dd] (minimized) and f3 - h w (power is rewarded).
double fitness_nullifier(const Eigen::MatrixXd& gamma_dd);
double fitness_nullifier_penalized(double trace, double h, double w);

}  // namespace spdc
