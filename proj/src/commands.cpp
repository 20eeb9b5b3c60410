#include "spdc/commands.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "spdc/analysis.hpp"
#include "spdc/io.hpp"
#include "spdc/jsa.hpp"

namespace spdc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_manifest(const RunConfig& config, const fs::path& out_dir,
                    const std::string& command, const std::vector<std::string>& outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["version"] = kVersionString;
  manifest["seed"] = config.seed;
  manifest["config"] = config.to_json();
  manifest["outputs"] = outputs;
  write_json(out_dir / "manifest.json", manifest);
}

struct Pipeline {
  FrequencyGrid grid;
  CrystalConfig crystal;
  PhaseMatchTable table;
  double sigma_omega = 0.0;
  PumpProfile base;   // Gaussian (plus configured chirp), before the shaper
  PumpProfile pump;   // after the shaper
  ShaperConfig shaper;
  double power_weight = 1.0;
};

ShaperConfig make_shaper(const ShaperBlock& block, double sigma_omega) {
  ShaperConfig shaper = ShaperConfig::identity(block.n_control,
                                               block.window_halfwidth_sigmas, sigma_omega);
  if (!block.identity) {
    shaper.amplitude = Eigen::Map<const Eigen::VectorXd>(block.amplitude.data(),
                                                         block.amplitude.size());
    shaper.phase = Eigen::Map<const Eigen::VectorXd>(block.phase.data(), block.phase.size());
  }
  return shaper;
}

Pipeline build_pipeline(const RunConfig& config) {
  Pipeline p;
  p.sigma_omega = gaussian_sigma_omega(config.pump.fwhm, config.crystal.pump_wavelength);
  p.crystal.length = config.crystal.length;
  p.crystal.pump_central_wavelength = config.crystal.pump_wavelength;
  p.crystal.theta = solve_phase_matching_angle(config.crystal.pump_wavelength,
                                               config.crystal.coeffs);
  p.grid = build_grid(2.0 * config.crystal.pump_wavelength, config.grid.halfwidth_sigmas,
                      p.sigma_omega, config.grid.n_points);
  p.table = build_phase_match_table(p.grid, p.crystal, config.crystal.coeffs);
  p.base = gaussian_pump(p.grid, config.pump.fwhm, config.crystal.pump_wavelength);
  if (config.pump.chirp_phi2 != 0.0) p.base = apply_chirp(p.base, config.pump.chirp_phi2);
  p.shaper = make_shaper(config.shaper, p.sigma_omega);
  p.pump = shaped_pump(p.base, p.shaper);
  p.power_weight = pump_power_weight(p.shaper, p.base);
  return p;
}

FrexelSpec frexel_spec_from(const FrexelBlock& block) {
  FrexelSpec spec = FrexelSpec::uniform(block.count, block.lambda_red, block.lambda_blue);
  spec.envelope_center_wavelength = block.envelope_center;
  spec.envelope_fwhm = block.envelope_fwhm;
  return spec;
}

ClusterGraph graph_from(const ClusterTask& task) {
  if (task.graph_kind == "linear") return ClusterGraph::linear(task.frexels.count);
  return ClusterGraph::from_edges(task.frexels.count, task.edges);
}

std::vector<int> identity_perm(int m) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  return perm;
}

void write_pump_csv(const fs::path& path, const PumpProfile& pump) {
  CsvWriter csv(path, {"omega_rad_s", "re_alpha", "im_alpha"});
  for (Eigen::Index i = 0; i < pump.axis.size(); ++i) {
    csv.write_row({pump.axis[i], pump.amplitudes[i].real(), pump.amplitudes[i].imag()});
  }
}

void write_gains_csv(const fs::path& path, const Eigen::VectorXd& gains, double eta_t) {
  CsvWriter csv(path, {"k", "gain", "squeezing_db"});
  for (Eigen::Index k = 0; k < gains.size(); ++k) {
    const double variance = 0.5 * std::exp(-2.0 * eta_t * gains[k]);
    csv.write_row({double(k + 1), gains[k], squeezing_db(variance)});
  }
}

json permutation_to_json(const std::vector<int>& perm) {
  json out = json::array();
  for (int p : perm) out.push_back(p + 1);
  return out;
}

}  // namespace

void cmd_phase_match(const RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const auto& coeffs = config.crystal.coeffs;
  const double lambda_p = config.crystal.pump_wavelength;
  const double theta = solve_phase_matching_angle(lambda_p, coeffs);
  const double lambda_p_um = lambda_p * 1e6;
  const double lambda_s_um = 2.0 * lambda_p_um;
  const double residual = std::abs(extraordinary_index(lambda_s_um, theta, coeffs) -
                                   sellmeier_index(CrystalAxis::X, lambda_p_um, coeffs));

  json report;
  report["theta_rad"] = theta;
  report["theta_deg"] = theta * 180.0 / kPi;
  report["residual"] = residual;
  report["n_x_pump"] = sellmeier_index(CrystalAxis::X, lambda_p_um, coeffs);
  report["n_x_signal"] = sellmeier_index(CrystalAxis::X, lambda_s_um, coeffs);
  report["n_y_signal"] = sellmeier_index(CrystalAxis::Y, lambda_s_um, coeffs);
  report["n_z_signal"] = sellmeier_index(CrystalAxis::Z, lambda_s_um, coeffs);
  report["n_e_signal"] = extraordinary_index(lambda_s_um, theta, coeffs);
  write_json(out_dir / "phase_match.json", report);
  write_manifest(config, out_dir, "phase-match", {"phase_match.json"});

  std::cout << "phase-match: theta = " << theta << " rad (" << theta * 180.0 / kPi
            << " deg), residual = " << residual << "\n";
}

void cmd_supermodes(const RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const SupermodesTask task = config.supermodes.value_or(SupermodesTask{});
  const Pipeline p = build_pipeline(config);
  const JointSpectralMatrix jsa = build_jsa(p.table, p.grid, p.pump);
  const SupermodeSet set = takagi_factorize(jsa.L);
  const double eta_t = calibrate_gain_scale(set, config.calibration.target_db);

  std::vector<std::string> outputs{"gains.csv", "supermodes.csv", "pump.csv", "summary.json"};
  write_gains_csv(out_dir / "gains.csv", set.gains, eta_t);
  write_pump_csv(out_dir / "pump.csv", p.pump);

  const int n_export = std::min(task.n_export, p.grid.size());
  std::vector<std::string> header{"omega_rad_s"};
  for (int k = 1; k <= n_export; ++k) {
    header.push_back("abs_" + std::to_string(k));
    header.push_back("arg_" + std::to_string(k));
  }
  CsvWriter modes_csv(out_dir / "supermodes.csv", header);
  std::vector<Eigen::VectorXcd> rows(n_export);
  std::vector<double> delays(n_export);
  for (int k = 0; k < n_export; ++k) {
    auto [delay, rephased] =
        subtract_linear_phase(p.grid.omegas, set.V.row(k).transpose(), p.grid.omega_center);
    rows[k] = rephased;
    delays[k] = delay;
  }
  for (int i = 0; i < p.grid.size(); ++i) {
    std::vector<double> cells{p.grid.omegas[i]};
    for (int k = 0; k < n_export; ++k) {
      cells.push_back(std::abs(rows[k][i]));
      cells.push_back(std::arg(rows[k][i]));
    }
    modes_csv.write_row(cells);
  }

  if (task.dump_jsa) {
    dump_complex_matrix(out_dir / "jsa.bin", jsa.L);
    CsvWriter abs_csv(out_dir / "jsa_abs.csv", {"j", "k", "abs_L"});
    for (int j = 0; j < p.grid.size(); ++j) {
      for (int k = 0; k < p.grid.size(); ++k) {
        abs_csv.write_row({double(j + 1), double(k + 1), std::abs(jsa.L(j, k))});
      }
    }
    outputs.push_back("jsa.bin");
    outputs.push_back("jsa_abs.csv");
  }

  json summary;
  summary["theta_rad"] = p.crystal.theta;
  summary["sigma_omega_rad_s"] = p.sigma_omega;
  summary["eta_t"] = eta_t;
  summary["leading_gain"] = set.gains[0];
  summary["gain_ratio_12"] = set.gains[0] / set.gains[1];
  summary["near_max_count"] = count_near_max(set.gains, task.near_max_fraction);
  summary["near_max_fraction"] = task.near_max_fraction;
  summary["schmidt_number"] = schmidt_number(set.gains);
  summary["total_gain"] = total_gain_invariant(jsa);
  summary["leading_squeezing_db"] = squeezing_db(0.5 * std::exp(-2.0 * eta_t * set.gains[0]));
  summary["power_weight"] = p.power_weight;
  summary["linear_phase_delays_s"] = delays;
  write_json(out_dir / "summary.json", summary);
  write_manifest(config, out_dir, "supermodes", outputs);

  std::cout << "supermodes: leading gain " << set.gains[0] << ", " << "Λ11/Λ22 "
            << set.gains[0] / set.gains[1] << ", modes above "
            << task.near_max_fraction << "·Λ11: "
            << count_near_max(set.gains, task.near_max_fraction) << "\n";
}

void cmd_chirp_scan(const RunConfig& config, const fs::path& out_dir) {
  if (!config.chirp_scan) {
    throw std::invalid_argument("config error: missing block 'chirp_scan' "
                                "(required keys: phi2_fs2; optional: top_count)");
  }
  fs::create_directories(out_dir);
  const Pipeline p = build_pipeline(config);
  const ChirpScanResult scan =
      chirp_scan(p.grid, p.table, config.pump.fwhm, config.crystal.pump_wavelength,
                 config.chirp_scan->phi2_values, config.chirp_scan->top_count);

  const auto write_family = [&](const std::string& name,
                                const std::vector<ChirpScanRow>& rows) {
    CsvWriter csv(out_dir / (name + ".csv"),
                  {"phi2_fs2", "dt_ratio", "lambda11_norm", "lambda_tot"});
    for (const ChirpScanRow& row : rows) {
      csv.write_row({row.phi2 * 1e30, row.dt_ratio, row.lambda11_norm, row.lambda_tot});
    }
    std::vector<std::string> header{"dt_ratio"};
    const int top = static_cast<int>(rows.front().top_gains.size());
    for (int k = 1; k <= top; ++k) header.push_back("gain_" + std::to_string(k));
    CsvWriter gains_csv(out_dir / (name + "_gains.csv"), header);
    for (const ChirpScanRow& row : rows) {
      std::vector<double> cells{row.dt_ratio};
      for (int k = 0; k < top; ++k) cells.push_back(row.top_gains[k]);
      gains_csv.write_row(cells);
    }
  };
  write_family("chirped", scan.chirped);
  write_family("duration_matched", scan.duration_matched);

  write_manifest(config, out_dir, "chirp-scan",
                 {"chirped.csv", "chirped_gains.csv", "duration_matched.csv",
                  "duration_matched_gains.csv"});
  std::cout << "chirp-scan: " << scan.chirped.size() << " points, Λ_tot(φ2=0) = "
            << scan.chirped.front().lambda_tot << "\n";
}

void cmd_cluster(const RunConfig& config, const fs::path& out_dir) {
  if (!config.cluster) {
    throw std::invalid_argument("config error: missing block 'cluster' "
                                "(required keys: none; optional: graph, edges, frexels, "
                                "optimize_permutation, permutation)");
  }
  fs::create_directories(out_dir);
  const ClusterTask& task = *config.cluster;
  const Pipeline p = build_pipeline(config);
  const JointSpectralMatrix jsa = build_jsa(p.table, p.grid, p.pump);
  const SupermodeSet set = takagi_factorize(jsa.L);
  const double eta_t = calibrate_gain_scale(set, config.calibration.target_db);

  const ModeMatrix frexels = build_frexels(frexel_spec_from(task.frexels), p.grid);
  const ClusterGraph graph = graph_from(task);
  const NullifierKernel kernel(frexels, set, graph);

  std::vector<int> perm =
      task.permutation.empty() ? identity_perm(task.frexels.count) : task.permutation;
  PhaseOptResult phases;
  json all_perms = json::array();
  if (task.optimize_permutation) {
    const PermutationOptResult result = optimize_frexel_permutation(kernel, eta_t);
    perm = result.perm;
    phases = result.phases;
    CsvWriter perm_csv(out_dir / "permutations.csv", {"permutation", "mean_variance", "mean_db"});
    for (const auto& [q, variance] : result.all_results) {
      std::string label;
      for (int v : q) label += std::to_string(v + 1);
      perm_csv.write_row({label, CsvWriter::format(variance),
                          CsvWriter::format(squeezing_db(variance))});
      all_perms.push_back({{"permutation", permutation_to_json(q)}, {"mean_variance", variance}});
    }
  } else {
    phases = optimize_frexel_phases(kernel, perm, eta_t);
  }

  const Eigen::VectorXd variances = kernel.variances(perm, phases.thetas, eta_t);
  CsvWriter null_csv(out_dir / "nullifiers.csv", {"nullifier", "variance", "db"});
  for (Eigen::Index j = 0; j < variances.size(); ++j) {
    null_csv.write_row({double(j + 1), variances[j], squeezing_db(variances[j])});
  }

  json summary;
  summary["eta_t"] = eta_t;
  summary["leading_squeezing_db"] = config.calibration.target_db;
  summary["permutation"] = permutation_to_json(perm);
  summary["thetas"] = std::vector<double>(phases.thetas.data(),
                                          phases.thetas.data() + phases.thetas.size());
  summary["mean_variance"] = phases.mean_variance;
  summary["mean_db"] = squeezing_db(phases.mean_variance);
  if (task.optimize_permutation) summary["all_permutations"] = all_perms;
  write_json(out_dir / "summary.json", summary);

  std::vector<std::string> outputs{"nullifiers.csv", "summary.json"};
  if (task.optimize_permutation) outputs.push_back("permutations.csv");
  write_manifest(config, out_dir, "cluster", outputs);

  std::cout << "cluster: permutation (";
  for (std::size_t i = 0; i < perm.size(); ++i) {
    std::cout << "π" << perm[i] + 1 << (i + 1 < perm.size() ? "," : "");
  }
  std::cout << "), mean nullifier variance " << phases.mean_variance << " ("
            << squeezing_db(phases.mean_variance) << " dB)\n";
}

namespace {

struct OptimizeState {
  Pipeline pipeline;
  JointSpectralMatrix base_jsa;
  SupermodeSet base_set;
  ModeMatrix frexels;
  ClusterGraph graph;
  std::vector<int> perm;
  Eigen::VectorXd thetas;
};

}  // namespace

void cmd_optimize(const RunConfig& config, const fs::path& out_dir) {
  if (!config.optimize) {
    throw std::invalid_argument("config error: missing block 'optimize' "
                                "(required keys: fitness; optional: k, a, b, h, population, "
                                "generations, initial_step, history_blend, amplitude_max, "
                                "cluster)");
  }
  fs::create_directories(out_dir);
  const OptimizeTask& task = *config.optimize;
  OptimizeState state;
  state.pipeline = build_pipeline(config);
  const Pipeline& p = state.pipeline;

  const bool nullifier_kind = task.fitness.rfind("nullifier", 0) == 0;
  const bool flatten_kind = task.fitness.rfind("flatten", 0) == 0;
  const bool penalized = task.fitness.size() > 4 &&
                         task.fitness.compare(task.fitness.size() - 4, 4, "_bar") == 0;
  const bool maximize = !nullifier_kind;
  const int k = std::min(task.flatten_count, p.grid.size());

  if (nullifier_kind) {
    // The detection modes (permutation and band phases) are frozen at the
    // unshaped-pump optimum before the pump optimization starts.
    state.base_jsa = build_jsa(p.table, p.grid, p.base);
    state.base_set = takagi_factorize(state.base_jsa.L);
    const double eta0 = calibrate_gain_scale(state.base_set, config.calibration.target_db);
    state.frexels = build_frexels(frexel_spec_from(task.cluster.frexels), p.grid);
    state.graph = graph_from(task.cluster);
    const NullifierKernel base_kernel(state.frexels, state.base_set, state.graph);
    if (!task.cluster.permutation.empty()) {
      state.perm = task.cluster.permutation;
      state.thetas = optimize_frexel_phases(base_kernel, state.perm, eta0).thetas;
    } else if (task.cluster.optimize_permutation) {
      const PermutationOptResult best = optimize_frexel_permutation(base_kernel, eta0);
      state.perm = best.perm;
      state.thetas = best.phases.thetas;
    } else {
      state.perm = identity_perm(task.cluster.frexels.count);
      state.thetas = optimize_frexel_phases(base_kernel, state.perm, eta0).thetas;
    }
  }

  const int nc = p.shaper.n_control;
  const auto shaper_from_u = [&](const Eigen::VectorXd& u) {
    ShaperConfig s = p.shaper;
    s.set_packed(u);
    return s;
  };

  const auto evaluate = [&](const Eigen::VectorXd& u) -> double {
    const ShaperConfig s = shaper_from_u(u);
    const double w = pump_power_weight(s, p.base);
    const PumpProfile pump = shaped_pump(p.base, s);
    const JointSpectralMatrix jsa = build_jsa(p.table, p.grid, pump);
    if (nullifier_kind) {
      const SupermodeSet set = takagi_factorize(jsa.L);
      const double eta_t = calibrate_gain_scale(set, config.calibration.target_db);
      const NullifierKernel kernel(state.frexels, set, state.graph);
      const double trace = kernel.variances(state.perm, state.thetas, eta_t).sum();
      return penalized ? fitness_nullifier_penalized(trace, task.penalty_h, w) : trace;
    }
    const Eigen::VectorXd gains = singular_gains(jsa.L);
    if (flatten_kind) {
      return penalized ? fitness_flatten_penalized(gains, k, task.penalty_a, w)
                       : fitness_flatten(gains, k);
    }
    return penalized ? fitness_gap_penalized(gains, task.penalty_b, w) : fitness_gap(gains);
  };

  EvoConfig evo;
  evo.dimension = 2 * nc;
  evo.population = task.population;
  evo.max_generations = task.generations;
  evo.initial_step = task.initial_step;
  evo.history_blend = task.history_blend;
  evo.seed = config.seed;
  evo.initial_point = p.shaper.packed();
  if (task.init == "random") {
    // Seeded uniform start over the mid-range of the box; the configured
    // shaper ridge can trap the search when the penalty is active.
    std::mt19937_64 rng(config.seed * 7919 + 13);
    const auto uniform = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < nc; ++i) evo.initial_point[i] = 0.2 + 1.2 * uniform();
    for (int i = nc; i < 2 * nc; ++i) evo.initial_point[i] = -1.5 + 3.0 * uniform();
  }
  evo.lower_bounds = Eigen::VectorXd::Constant(2 * nc, -std::numeric_limits<double>::infinity());
  evo.lower_bounds.head(nc).setZero();
  evo.upper_bounds = Eigen::VectorXd::Constant(2 * nc, std::numeric_limits<double>::infinity());
  evo.upper_bounds.head(nc).setConstant(task.amplitude_max);

  const EvoResult result = evolve(evaluate, evo, maximize);

  CsvWriter history(out_dir / "history.csv",
                    {"generation", "best", "mean", "step_size", "best_so_far"});
  for (const GenerationRecord& rec : result.history) {
    history.write_row({double(rec.generation), rec.best, rec.mean, rec.step_size,
                       rec.best_so_far});
  }

  const ShaperConfig best_shaper = shaper_from_u(result.best_u);
  const PumpProfile best_pump = shaped_pump(p.base, best_shaper);
  write_pump_csv(out_dir / "best_pump.csv", best_pump);

  const JointSpectralMatrix best_jsa = build_jsa(p.table, p.grid, best_pump);
  const double best_w = pump_power_weight(best_shaper, p.base);
  json summary;
  summary["fitness"] = task.fitness;
  summary["best_value"] = result.best_value;
  summary["evaluations"] = result.evaluations;
  summary["generations"] = static_cast<int>(result.history.size());
  summary["power_weight"] = best_w;
  summary["shaper_amplitude"] = std::vector<double>(result.best_u.data(),
                                                    result.best_u.data() + nc);
  summary["shaper_phase"] = std::vector<double>(result.best_u.data() + nc,
                                                result.best_u.data() + 2 * nc);
  if (nullifier_kind) {
    const SupermodeSet set = takagi_factorize(best_jsa.L);
    const double eta_t = calibrate_gain_scale(set, config.calibration.target_db);
    const NullifierKernel kernel(state.frexels, set, state.graph);
    const double frozen = kernel.variances(state.perm, state.thetas, eta_t).mean();
    const PhaseOptResult reopt = optimize_frexel_phases(kernel, state.perm, eta_t);
    summary["permutation"] = permutation_to_json(state.perm);
    summary["mean_variance_frozen_phases"] = frozen;
    summary["mean_variance_reoptimized"] = reopt.mean_variance;
    summary["mean_db_reoptimized"] = squeezing_db(reopt.mean_variance);
    const NullifierKernel base_kernel(state.frexels, state.base_set, state.graph);
    const double eta0 = calibrate_gain_scale(state.base_set, config.calibration.target_db);
    const double baseline = base_kernel.variances(state.perm, state.thetas, eta0).mean();
    summary["baseline_mean_variance"] = baseline;
    summary["baseline_mean_db"] = squeezing_db(baseline);
  } else {
    const Eigen::VectorXd gains = singular_gains(best_jsa.L);
    summary["gain_ratio_12"] = gains[0] / gains[1];
    summary["near_max_count_0.9"] = count_near_max(gains, 0.9);
    summary["schmidt_number"] = schmidt_number(gains);
  }
  write_json(out_dir / "summary.json", summary);
  write_manifest(config, out_dir, "optimize",
                 {"history.csv", "best_pump.csv", "summary.json"});

  std::cout << "optimize[" << task.fitness << "]: best " << result.best_value << " after "
            << result.evaluations << " evaluations, w = " << best_w << "\n";
}

void cmd_squeezing_scan(const RunConfig& config, const fs::path& out_dir) {
  if (!config.squeezing_scan) {
    throw std::invalid_argument("config error: missing block 'squeezing_scan' "
                                "(required keys: db_values; optional: cluster, "
                                "shaper_amplitude, shaper_phase)");
  }
  fs::create_directories(out_dir);
  const SqueezingScanTask& task = *config.squeezing_scan;

  RunConfig effective = config;
  if (!task.shaper_amplitude.empty()) {
    effective.shaper.identity = false;
    effective.shaper.amplitude = task.shaper_amplitude;
    effective.shaper.phase = task.shaper_phase.empty()
                                 ? std::vector<double>(task.shaper_amplitude.size(), 0.0)
                                 : task.shaper_phase;
    effective.shaper.n_control = static_cast<int>(task.shaper_amplitude.size());
  }
  const Pipeline p = build_pipeline(effective);
  const JointSpectralMatrix jsa = build_jsa(p.table, p.grid, p.pump);
  const SupermodeSet set = takagi_factorize(jsa.L);

  const ModeMatrix frexels = build_frexels(frexel_spec_from(task.cluster.frexels), p.grid);
  const ClusterGraph graph = graph_from(task.cluster);
  const NullifierKernel kernel(frexels, set, graph);
  const std::vector<int> perm = task.cluster.permutation.empty()
                                    ? identity_perm(task.cluster.frexels.count)
                                    : task.cluster.permutation;

  std::vector<double> eta_values;
  for (double db : task.db_values) {
    eta_values.push_back(db * std::log(10.0) / (20.0 * set.gains[0]));
  }
  const std::vector<SqueezingScanPoint> points =
      squeezing_scan(kernel, perm, set.gains[0], eta_values);

  CsvWriter csv(out_dir / "squeezing_scan.csv",
                {"leading_db", "eta_t", "mean_variance", "mean_db"});
  for (const SqueezingScanPoint& pt : points) {
    csv.write_row({pt.leading_db, pt.eta_t, pt.mean_nullifier_variance,
                   squeezing_db(pt.mean_nullifier_variance)});
  }
  write_manifest(config, out_dir, "squeezing-scan", {"squeezing_scan.csv"});

  std::cout << "squeezing-scan: " << points.size() << " points\n";
}

}  // namespace spdc
