#include "spdc/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace spdc {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw std::invalid_argument("config: '" + path + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) {
      throw std::invalid_argument("config: unknown key '" + path + "." + key + "'");
    }
  }
}

double require_positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw std::invalid_argument("config: " + what + " must be positive");
  return v;
}

AxisCoefficients parse_axis(const json& j, const std::string& path) {
  check_keys(j, path, {"A", "B", "C", "D"});
  AxisCoefficients c{j.at("A").get<double>(), j.at("B").get<double>(),
                     j.at("C").get<double>(), j.at("D").get<double>()};
  if (!(c.A > 0.0 && c.B > 0.0 && c.C > 0.0 && c.D > 0.0)) {
    throw std::invalid_argument("config: " + path + " coefficients must be positive");
  }
  return c;
}

CrystalBlock parse_crystal(const json& j) {
  CrystalBlock out;
  check_keys(j, "crystal", {"material", "length_mm", "pump_central_wavelength_nm", "sellmeier"});
  out.material = j.value("material", out.material);
  out.length = require_positive(j.value("length_mm", out.length * 1e3), "crystal.length_mm") * 1e-3;
  out.pump_wavelength =
      require_positive(j.value("pump_central_wavelength_nm", out.pump_wavelength * 1e9),
                       "crystal.pump_central_wavelength_nm") * 1e-9;
  if (j.contains("sellmeier")) {
    const json& s = j.at("sellmeier");
    check_keys(s, "crystal.sellmeier", {"x", "y", "z"});
    out.coeffs.x = parse_axis(s.at("x"), "crystal.sellmeier.x");
    out.coeffs.y = parse_axis(s.at("y"), "crystal.sellmeier.y");
    out.coeffs.z = parse_axis(s.at("z"), "crystal.sellmeier.z");
  }
  return out;
}

PumpConfig parse_pump(const json& j) {
  PumpConfig out;
  check_keys(j, "pump", {"fwhm_nm", "chirp_fs2"});
  out.fwhm = require_positive(j.value("fwhm_nm", out.fwhm * 1e9), "pump.fwhm_nm") * 1e-9;
  out.chirp_phi2 = j.value("chirp_fs2", 0.0) * 1e-30;
  return out;
}

GridConfig parse_grid(const json& j) {
  GridConfig out;
  check_keys(j, "grid", {"n_points", "halfwidth_sigmas"});
  out.n_points = j.value("n_points", out.n_points);
  if (out.n_points < 2) throw std::invalid_argument("config: grid.n_points must be >= 2");
  out.halfwidth_sigmas = require_positive(j.value("halfwidth_sigmas", out.halfwidth_sigmas),
                                          "grid.halfwidth_sigmas");
  return out;
}

ShaperBlock parse_shaper(const json& j) {
  ShaperBlock out;
  if (j.is_string()) {
    if (j.get<std::string>() != "identity") {
      throw std::invalid_argument("config: shaper must be 'identity' or an object");
    }
    return out;
  }
  check_keys(j, "shaper", {"n_control", "window_halfwidth_sigmas", "amplitude", "phase"});
  out.n_control = j.value("n_control", out.n_control);
  if (out.n_control < 2) throw std::invalid_argument("config: shaper.n_control must be >= 2");
  out.window_halfwidth_sigmas =
      require_positive(j.value("window_halfwidth_sigmas", out.window_halfwidth_sigmas),
                       "shaper.window_halfwidth_sigmas");
  if (j.contains("amplitude") != j.contains("phase")) {
    throw std::invalid_argument("config: shaper.amplitude and shaper.phase come together");
  }
  if (j.contains("amplitude")) {
    out.identity = false;
    out.amplitude = j.at("amplitude").get<std::vector<double>>();
    out.phase = j.at("phase").get<std::vector<double>>();
    if (static_cast<int>(out.amplitude.size()) != out.n_control ||
        static_cast<int>(out.phase.size()) != out.n_control) {
      throw std::invalid_argument("config: shaper control vectors must have n_control entries");
    }
    for (double a : out.amplitude) {
      if (a < 0.0) throw std::invalid_argument("config: shaper amplitudes must be >= 0");
    }
  }
  return out;
}

FrexelBlock parse_frexels(const json& j, const std::string& path) {
  FrexelBlock out;
  check_keys(j, path, {"count", "lambda_red_nm", "lambda_blue_nm", "envelope_center_nm",
                       "envelope_fwhm_nm"});
  out.count = j.value("count", out.count);
  if (out.count < 1 || out.count > 8) {
    throw std::invalid_argument("config: " + path + ".count must be in [1, 8]");
  }
  out.lambda_red = require_positive(j.value("lambda_red_nm", out.lambda_red * 1e9), path) * 1e-9;
  out.lambda_blue = require_positive(j.value("lambda_blue_nm", out.lambda_blue * 1e9), path) * 1e-9;
  if (out.lambda_blue >= out.lambda_red) {
    throw std::invalid_argument("config: " + path + " requires lambda_blue_nm < lambda_red_nm");
  }
  out.envelope_center =
      require_positive(j.value("envelope_center_nm", out.envelope_center * 1e9), path) * 1e-9;
  out.envelope_fwhm =
      require_positive(j.value("envelope_fwhm_nm", out.envelope_fwhm * 1e9), path) * 1e-9;
  return out;
}

ClusterTask parse_cluster(const json& j, const std::string& path) {
  ClusterTask out;
  check_keys(j, path, {"graph", "edges", "frexels", "optimize_permutation", "permutation"});
  out.graph_kind = j.value("graph", out.graph_kind);
  if (out.graph_kind != "linear" && out.graph_kind != "edges") {
    throw std::invalid_argument("config: " + path + ".graph must be 'linear' or 'edges'");
  }
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("config: " + path + ".edges entries must be pairs");
      }
      out.edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
  }
  if (out.graph_kind == "edges" && out.edges.empty()) {
    throw std::invalid_argument("config: " + path + ".graph = 'edges' needs an edge list");
  }
  if (j.contains("frexels")) out.frexels = parse_frexels(j.at("frexels"), path + ".frexels");
  out.optimize_permutation = j.value("optimize_permutation", out.optimize_permutation);
  if (j.contains("permutation") && !j.at("permutation").empty()) {
    for (int p : j.at("permutation").get<std::vector<int>>()) out.permutation.push_back(p - 1);
    if (static_cast<int>(out.permutation.size()) != out.frexels.count) {
      throw std::invalid_argument("config: " + path + ".permutation length mismatch");
    }
    std::vector<bool> seen(out.frexels.count, false);
    for (int p : out.permutation) {
      if (p < 0 || p >= out.frexels.count || seen[p]) {
        throw std::invalid_argument("config: " + path + ".permutation is not a permutation");
      }
      seen[p] = true;
    }
  }
  return out;
}

SupermodesTask parse_supermodes(const json& j) {
  SupermodesTask out;
  check_keys(j, "supermodes", {"n_export", "dump_jsa", "near_max_fraction"});
  out.n_export = j.value("n_export", out.n_export);
  out.dump_jsa = j.value("dump_jsa", out.dump_jsa);
  out.near_max_fraction = j.value("near_max_fraction", out.near_max_fraction);
  if (!(out.near_max_fraction > 0.0 && out.near_max_fraction < 1.0)) {
    throw std::invalid_argument("config: supermodes.near_max_fraction must be in (0, 1)");
  }
  return out;
}

ChirpScanTask parse_chirp_scan(const json& j) {
  ChirpScanTask out;
  check_keys(j, "chirp_scan", {"phi2_fs2", "top_count"});
  if (!j.contains("phi2_fs2")) {
    throw std::invalid_argument("config: chirp_scan.phi2_fs2 is required");
  }
  for (double v : j.at("phi2_fs2").get<std::vector<double>>()) out.phi2_values.push_back(v * 1e-30);
  out.top_count = j.value("top_count", out.top_count);
  if (out.top_count < 1) throw std::invalid_argument("config: chirp_scan.top_count must be >= 1");
  return out;
}

OptimizeTask parse_optimize(const json& j) {
  OptimizeTask out;
  check_keys(j, "optimize", {"fitness", "k", "a", "b", "h", "population", "generations",
                             "initial_step", "history_blend", "amplitude_max", "init",
                             "cluster"});
  out.fitness = j.value("fitness", out.fitness);
  static const std::set<std::string> kinds{"flatten_f1", "flatten_f1_bar", "gap_f2",
                                           "gap_f2_bar", "nullifier_f3", "nullifier_f3_bar"};
  if (!kinds.count(out.fitness)) {
    throw std::invalid_argument("config: optimize.fitness '" + out.fitness + "' unknown");
  }
  out.flatten_count = j.value("k", out.flatten_count);
  out.penalty_a = j.value("a", out.penalty_a);
  out.penalty_b = j.value("b", out.penalty_b);
  out.penalty_h = j.value("h", out.penalty_h);
  if (out.penalty_a < 0 || out.penalty_b < 0 || out.penalty_h < 0) {
    throw std::invalid_argument("config: optimize penalties must be nonnegative");
  }
  out.population = j.value("population", out.population);
  out.generations = j.value("generations", out.generations);
  out.initial_step = require_positive(j.value("initial_step", out.initial_step),
                                      "optimize.initial_step");
  out.history_blend = j.value("history_blend", out.history_blend);
  if (out.history_blend < 0.0 || out.history_blend >= 1.0) {
    throw std::invalid_argument("config: optimize.history_blend must be in [0, 1)");
  }
  out.amplitude_max = require_positive(j.value("amplitude_max", out.amplitude_max),
                                       "optimize.amplitude_max");
  out.init = j.value("init", out.init);
  if (out.init != "identity" && out.init != "random") {
    throw std::invalid_argument("config: optimize.init must be 'identity' or 'random'");
  }
  if (j.contains("cluster")) out.cluster = parse_cluster(j.at("cluster"), "optimize.cluster");
  return out;
}

SqueezingScanTask parse_squeezing_scan(const json& j) {
  SqueezingScanTask out;
  check_keys(j, "squeezing_scan", {"db_values", "cluster", "shaper_amplitude", "shaper_phase"});
  if (!j.contains("db_values")) {
    throw std::invalid_argument("config: squeezing_scan.db_values is required");
  }
  out.db_values = j.at("db_values").get<std::vector<double>>();
  if (j.contains("cluster")) out.cluster = parse_cluster(j.at("cluster"), "squeezing_scan.cluster");
  if (j.contains("shaper_amplitude")) {
    out.shaper_amplitude = j.at("shaper_amplitude").get<std::vector<double>>();
  }
  if (j.contains("shaper_phase")) {
    out.shaper_phase = j.at("shaper_phase").get<std::vector<double>>();
  }
  return out;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j, "$", {"schema_version", "crystal", "pump", "grid", "shaper", "calibration",
                      "seed", "supermodes", "chirp_scan", "cluster", "optimize",
                      "squeezing_scan"});
  const int version = j.value("schema_version", 1);
  if (version != 1) throw std::invalid_argument("config: unsupported schema_version");
  RunConfig out;
  if (j.contains("crystal")) out.crystal = parse_crystal(j.at("crystal"));
  if (j.contains("pump")) out.pump = parse_pump(j.at("pump"));
  if (j.contains("grid")) out.grid = parse_grid(j.at("grid"));
  if (j.contains("shaper")) out.shaper = parse_shaper(j.at("shaper"));
  if (j.contains("calibration")) {
    check_keys(j.at("calibration"), "calibration", {"target_db"});
    out.calibration.target_db = j.at("calibration").value("target_db", out.calibration.target_db);
    if (out.calibration.target_db < 0.0) {
      throw std::invalid_argument("config: calibration.target_db must be >= 0");
    }
  }
  out.seed = j.value("seed", out.seed);
  if (j.contains("supermodes")) out.supermodes = parse_supermodes(j.at("supermodes"));
  if (j.contains("chirp_scan")) out.chirp_scan = parse_chirp_scan(j.at("chirp_scan"));
  if (j.contains("cluster")) out.cluster = parse_cluster(j.at("cluster"), "cluster");
  if (j.contains("optimize")) out.optimize = parse_optimize(j.at("optimize"));
  if (j.contains("squeezing_scan")) out.squeezing_scan = parse_squeezing_scan(j.at("squeezing_scan"));
  return out;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return from_json(json::parse(in));
}

namespace {

json axis_json(const AxisCoefficients& c) {
  return json{{"A", c.A}, {"B", c.B}, {"C", c.C}, {"D", c.D}};
}

json cluster_json(const ClusterTask& c) {
  json edges = json::array();
  for (const auto& [a, b] : c.edges) edges.push_back({a + 1, b + 1});
  json perm = json::array();
  for (int p : c.permutation) perm.push_back(p + 1);
  return json{{"graph", c.graph_kind},
              {"edges", edges},
              {"frexels",
               {{"count", c.frexels.count},
                {"lambda_red_nm", c.frexels.lambda_red * 1e9},
                {"lambda_blue_nm", c.frexels.lambda_blue * 1e9},
                {"envelope_center_nm", c.frexels.envelope_center * 1e9},
                {"envelope_fwhm_nm", c.frexels.envelope_fwhm * 1e9}}},
              {"optimize_permutation", c.optimize_permutation},
              {"permutation", perm}};
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["crystal"] = {{"material", crystal.material},
                  {"length_mm", crystal.length * 1e3},
                  {"pump_central_wavelength_nm", crystal.pump_wavelength * 1e9},
                  {"sellmeier",
                   {{"x", axis_json(crystal.coeffs.x)},
                    {"y", axis_json(crystal.coeffs.y)},
                    {"z", axis_json(crystal.coeffs.z)}}}};
  j["pump"] = {{"fwhm_nm", pump.fwhm * 1e9}, {"chirp_fs2", pump.chirp_phi2 * 1e30}};
  j["grid"] = {{"n_points", grid.n_points}, {"halfwidth_sigmas", grid.halfwidth_sigmas}};
  if (shaper.identity) {
    j["shaper"] = "identity";
  } else {
    j["shaper"] = {{"n_control", shaper.n_control},
                   {"window_halfwidth_sigmas", shaper.window_halfwidth_sigmas},
                   {"amplitude", shaper.amplitude},
                   {"phase", shaper.phase}};
  }
  j["calibration"] = {{"target_db", calibration.target_db}};
  j["seed"] = seed;
  if (supermodes) {
    j["supermodes"] = {{"n_export", supermodes->n_export},
                       {"dump_jsa", supermodes->dump_jsa},
                       {"near_max_fraction", supermodes->near_max_fraction}};
  }
  if (chirp_scan) {
    json phi2 = json::array();
    for (double v : chirp_scan->phi2_values) phi2.push_back(v * 1e30);
    j["chirp_scan"] = {{"phi2_fs2", phi2}, {"top_count", chirp_scan->top_count}};
  }
  if (cluster) j["cluster"] = cluster_json(*cluster);
  if (optimize) {
    j["optimize"] = {{"fitness", optimize->fitness},
                     {"k", optimize->flatten_count},
                     {"a", optimize->penalty_a},
                     {"b", optimize->penalty_b},
                     {"h", optimize->penalty_h},
                     {"population", optimize->population},
                     {"generations", optimize->generations},
                     {"initial_step", optimize->initial_step},
                     {"history_blend", optimize->history_blend},
                     {"amplitude_max", optimize->amplitude_max},
                     {"init", optimize->init},
                     {"cluster", cluster_json(optimize->cluster)}};
  }
  if (squeezing_scan) {
    j["squeezing_scan"] = {{"db_values", squeezing_scan->db_values},
                           {"cluster", cluster_json(squeezing_scan->cluster)},
                           {"shaper_amplitude", squeezing_scan->shaper_amplitude},
                           {"shaper_phase", squeezing_scan->shaper_phase}};
  }
  return j;
}

}  // namespace spdc
