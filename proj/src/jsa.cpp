#include "spdc/jsa.hpp"

#include <cmath>
#include <stdexcept>

namespace spdc {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

namespace {

void fill_table_rows(const FrequencyGrid& grid, const CrystalConfig& crystal,
                     const SellmeierCoefficients& coeffs, PhaseMatchTable& table,
                     bool parallel) {
  const int n = grid.size();
  // Wave numbers are one-dimensional in frequency; tabulate them once.
  Eigen::VectorXd ks(n);
  for (int j = 0; j < n; ++j) {
    ks[j] = signal_wave_number(grid.omegas[j], crystal.theta, coeffs);
  }
  Eigen::VectorXd kp(2 * n - 1);
  const Eigen::VectorXd sums = pump_axis(grid);
  for (int m = 0; m < 2 * n - 1; ++m) {
    kp[m] = pump_wave_number(sums[m], coeffs);
  }
  table.sinc_phi.resize(n, n);
  const double half_length = crystal.length / 2.0;
#pragma omp parallel for schedule(static) if (parallel)
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      const double phi = (kp[j + k] - ks[j] - ks[k]) * half_length;
      const double s = sinc(phi);
      table.sinc_phi(j, k) = s;
      table.sinc_phi(k, j) = s;
    }
  }
}

}  // namespace

PhaseMatchTable build_phase_match_table(const FrequencyGrid& grid,
                                        const CrystalConfig& crystal,
                                        const SellmeierCoefficients& coeffs) {
  PhaseMatchTable table;
  table.grid_omega0 = grid.omegas[0];
  table.grid_spacing = grid.spacing();
  fill_table_rows(grid, crystal, coeffs, table, true);
  return table;
}

PhaseMatchTable build_phase_match_table_serial(const FrequencyGrid& grid,
                                               const CrystalConfig& crystal,
                                               const SellmeierCoefficients& coeffs) {
  PhaseMatchTable table;
  table.grid_omega0 = grid.omegas[0];
  table.grid_spacing = grid.spacing();
  fill_table_rows(grid, crystal, coeffs, table, false);
  return table;
}

namespace {

void check_pump_axis(const FrequencyGrid& grid, const PumpProfile& pump) {
  const int n = grid.size();
  if (pump.axis.size() != 2 * n - 1) {
    throw std::invalid_argument("build_jsa: pump axis does not cover the sum-frequency axis");
  }
  const double spacing = grid.spacing();
  const double tol = 1e-6 * spacing;
  if (std::abs(pump.axis[0] - 2.0 * grid.omegas[0]) > tol ||
      std::abs(pump.axis[pump.axis.size() - 1] - 2.0 * grid.omegas[n - 1]) > tol) {
    throw std::invalid_argument("build_jsa: pump axis does not match the grid's sum frequencies");
  }
}

JointSpectralMatrix assemble(const PhaseMatchTable& table, const FrequencyGrid& grid,
                             const PumpProfile& pump, bool parallel) {
  check_pump_axis(grid, pump);
  const int n = grid.size();
  if (table.sinc_phi.rows() != n) {
    throw std::invalid_argument("build_jsa: phase-match table size does not match grid");
  }
  JointSpectralMatrix jsa;
  jsa.L.resize(n, n);
#pragma omp parallel for schedule(static) if (parallel)
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      const std::complex<double> v = table.sinc_phi(j, k) * pump.amplitudes[j + k];
      jsa.L(j, k) = v;
      jsa.L(k, j) = v;
    }
  }
  return jsa;
}

}  // namespace

JointSpectralMatrix build_jsa(const PhaseMatchTable& table, const FrequencyGrid& grid,
                              const PumpProfile& pump) {
  return assemble(table, grid, pump, true);
}

JointSpectralMatrix build_jsa_serial(const PhaseMatchTable& table, const FrequencyGrid& grid,
                                     const PumpProfile& pump) {
  return assemble(table, grid, pump, false);
}

JointSpectralMatrix build_jsa(const FrequencyGrid& grid, const PumpProfile& pump,
                              const CrystalConfig& crystal,
                              const SellmeierCoefficients& coeffs) {
  return build_jsa(build_phase_match_table(grid, crystal, coeffs), grid, pump);
}

double total_gain_invariant(const JointSpectralMatrix& jsa) {
  // Serial accumulation keeps the value independent of thread count.
  double total = 0.0;
  const auto* data = jsa.L.data();
  const Eigen::Index size = jsa.L.size();
  for (Eigen::Index i = 0; i < size; ++i) total += std::norm(data[i]);
  return total;
}

}  // namespace spdc
