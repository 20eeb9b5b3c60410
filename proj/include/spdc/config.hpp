#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdc/dispersion.hpp"
#include "spdc/optimizer.hpp"

namespace spdc {

// Run configuration, JSON-backed. Unknown keys are rejected so typos in
// physics parameters fail loudly. All lengths are SI internally; the JSON
// uses mm / nm / fs^2 as indicated by the key names.
struct GridConfig {
  int n_points = 501;
  double halfwidth_sigmas = 8.0;
};

struct PumpConfig {
  double fwhm = 3.54e-9;    // m, intensity FWHM in wavelength
  double chirp_phi2 = 0.0;  // s^2
};

struct CrystalBlock {
  std::string material = "BiBO";
  double length = 0.5e-3;                    // m
  double pump_wavelength = 397.5e-9;         // m
  SellmeierCoefficients coeffs = SellmeierCoefficients::bibo();
};

struct CalibrationConfig {
  double target_db = 7.0;
};

struct ShaperBlock {
  bool identity = true;
  int n_control = 32;
  double window_halfwidth_sigmas = 3.0;
  std::vector<double> amplitude;  // empty with identity = true
  std::vector<double> phase;
};

struct SupermodesTask {
  int n_export = 8;
  bool dump_jsa = false;
  double near_max_fraction = 0.9;
};

struct ChirpScanTask {
  std::vector<double> phi2_values;  // s^2
  int top_count = 100;
};

struct FrexelBlock {
  int count = 4;
  double lambda_red = 808e-9;   // m, low-frequency outer edge
  double lambda_blue = 782e-9;  // m, high-frequency outer edge
  double envelope_center = 795e-9;
  double envelope_fwhm = 10e-9;
};

struct ClusterTask {
  std::string graph_kind = "linear";                // or "edges"
  std::vector<std::pair<int, int>> edges;           // 1-based in JSON
  FrexelBlock frexels;
  bool optimize_permutation = true;
  std::vector<int> permutation;                     // 1-based in JSON; empty = identity
};

struct OptimizeTask {
  std::string fitness = "gap_f2_bar";  // flatten_f1[_bar] | gap_f2[_bar] | nullifier_f3[_bar]
  int flatten_count = 100;             // k
  double penalty_a = 3.0;
  double penalty_b = 1.0;
  double penalty_h = 1.35;
  int population = 0;
  int generations = 500;
  double initial_step = 0.3;
  double history_blend = 0.3;
  double amplitude_max = 2.0;          // box constraint on amplitude controls
  std::string init = "identity";       // or "random" (seeded uniform start)
  ClusterTask cluster;                 // used by nullifier fitness
};

struct SqueezingScanTask {
  std::vector<double> db_values;
  ClusterTask cluster;
  std::vector<double> shaper_amplitude;  // optional explicit profile
  std::vector<double> shaper_phase;
};

struct RunConfig {
  CrystalBlock crystal;
  PumpConfig pump;
  GridConfig grid;
  ShaperBlock shaper;
  CalibrationConfig calibration;
  std::uint64_t seed = 1;

  std::optional<SupermodesTask> supermodes;
  std::optional<ChirpScanTask> chirp_scan;
  std::optional<ClusterTask> cluster;
  std::optional<OptimizeTask> optimize;
  std::optional<SqueezingScanTask> squeezing_scan;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;  // fully resolved, for the manifest
};

}  // namespace spdc
