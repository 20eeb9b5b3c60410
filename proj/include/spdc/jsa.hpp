#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spdc/dispersion.hpp"
#include "spdc/pump.hpp"

namespace spdc {

// sin(x)/x with a series branch near zero (the phase-matched diagonal).
double sinc(double x);

// Phase-matching factor sinc(phi(wj, wk)) for every grid pair. Depends only
// on grid and crystal, so it is computed once and reused across pump shapes.
struct PhaseMatchTable {
  Eigen::MatrixXd sinc_phi;  // N x N, symmetric
  double grid_omega0 = 0.0;
  double grid_spacing = 0.0;
};

PhaseMatchTable build_phase_match_table(const FrequencyGrid& grid,
                                        const CrystalConfig& crystal,
                                        const SellmeierCoefficients& coeffs);
PhaseMatchTable build_phase_match_table_serial(const FrequencyGrid& grid,
                                               const CrystalConfig& crystal,
                                               const SellmeierCoefficients& coeffs);

struct JointSpectralMatrix {
  Eigen::MatrixXcd L;  // N x N, symmetric by construction
};

// L_jk = sinc(phi(wj, wk)) alpha(wj + wk). The pump must be sampled on the
// grid's sum-frequency axis.
JointSpectralMatrix build_jsa(const PhaseMatchTable& table, const FrequencyGrid& grid,
                              const PumpProfile& pump);
JointSpectralMatrix build_jsa_serial(const PhaseMatchTable& table, const FrequencyGrid& grid,
                                     const PumpProfile& pump);

// Convenience form that builds the table internally.
JointSpectralMatrix build_jsa(const FrequencyGrid& grid, const PumpProfile& pump,
                              const CrystalConfig& crystal,
                              const SellmeierCoefficients& coeffs);

// Lambda_tot = sum_jk |L_jk|^2 = sum_j Lambda_jj^2 (Frobenius identity);
// independent of any pure spectral phase on the pump.
double total_gain_invariant(const JointSpectralMatrix& jsa);

}  // namespace spdc
