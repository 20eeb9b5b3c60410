// Timing comparison between the OpenMP kernels and their serial reference
// implementations, with an equality check on the outputs.

#include <cstdio>
#include <omp.h>

#include "spdc/dispersion.hpp"
#include "spdc/jsa.hpp"
#include "spdc/modes.hpp"

using namespace spdc;

namespace {

struct Timing {
  double serial = 0.0;
  double parallel = 0.0;
  double max_diff = 0.0;
};

void report(const char* name, const Timing& t) {
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   max|diff| %g\n",
              name, 1e3 * t.serial, 1e3 * t.parallel,
              t.parallel > 0.0 ? t.serial / t.parallel : 0.0, t.max_diff);
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const double start = omp_get_wtime();
    f();
    best = std::min(best, omp_get_wtime() - start);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 501;
  std::printf("grid points: %d, omp threads: %d\n", n, omp_get_max_threads());

  const SellmeierCoefficients coeffs = SellmeierCoefficients::bibo();
  CrystalConfig crystal;
  crystal.length = 1.5e-3;
  crystal.theta = solve_phase_matching_angle(crystal.pump_central_wavelength, coeffs);
  const double sigma = gaussian_sigma_omega(3.54e-9, crystal.pump_central_wavelength);
  const FrequencyGrid grid = build_grid(795e-9, 8.0, sigma, n);
  const PumpProfile pump = gaussian_pump(grid, 3.54e-9, crystal.pump_central_wavelength);

  Timing table_timing;
  PhaseMatchTable table;
  table_timing.serial = time_best_of(3, [&] {
    table = build_phase_match_table_serial(grid, crystal, coeffs);
  });
  PhaseMatchTable table_par;
  table_timing.parallel = time_best_of(3, [&] {
    table_par = build_phase_match_table(grid, crystal, coeffs);
  });
  table_timing.max_diff = (table.sinc_phi - table_par.sinc_phi).cwiseAbs().maxCoeff();
  report("phase-match table", table_timing);

  Timing jsa_timing;
  JointSpectralMatrix jsa_serial, jsa_parallel;
  jsa_timing.serial = time_best_of(5, [&] {
    jsa_serial = build_jsa_serial(table, grid, pump);
  });
  jsa_timing.parallel = time_best_of(5, [&] {
    jsa_parallel = build_jsa(table, grid, pump);
  });
  jsa_timing.max_diff = (jsa_serial.L - jsa_parallel.L).cwiseAbs().maxCoeff();
  report("jsa assembly", jsa_timing);

  // Permutation search: the inner phase optimizations run per permutation,
  // serially in one case and across the OpenMP pool in the other.
  const SupermodeSet set = takagi_factorize(jsa_parallel.L);
  const double eta_t = calibrate_gain_scale(set, 7.0);
  const ModeMatrix frexels = build_frexels(FrexelSpec::uniform(4), grid);
  const NullifierKernel kernel(frexels, set, ClusterGraph::linear(4));

  Timing perm_timing;
  PermutationOptResult serial_result, parallel_result;
  const int saved = omp_get_max_threads();
  perm_timing.serial = time_best_of(1, [&] {
    omp_set_num_threads(1);
    serial_result = optimize_frexel_permutation(kernel, eta_t);
  });
  omp_set_num_threads(saved);
  perm_timing.parallel = time_best_of(1, [&] {
    parallel_result = optimize_frexel_permutation(kernel, eta_t);
  });
  perm_timing.max_diff =
      std::abs(serial_result.phases.mean_variance - parallel_result.phases.mean_variance);
  report("permutation search", perm_timing);

  const bool same_perm = serial_result.perm == parallel_result.perm;
  std::printf("permutation search argmin identical across thread counts: %s\n",
              same_perm ? "yes" : "NO");
  return (table_timing.max_diff == 0.0 && jsa_timing.max_diff == 0.0 &&
          perm_timing.max_diff == 0.0 && same_perm)
             ? 0
             : 1;
}
