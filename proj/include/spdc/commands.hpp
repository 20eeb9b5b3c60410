#pragma once

#include <filesystem>

#include "spdc/config.hpp"

namespace spdc {

inline constexpr const char* kVersionString = "1.0.0";

// Each command materializes its artifacts under out_dir and writes a
// manifest.json with the fully resolved configuration; rerunning with the
// manifest reproduces every emitted number.
void cmd_phase_match(const RunConfig& config, const std::filesystem::path& out_dir);
void cmd_supermodes(const RunConfig& config, const std::filesystem::path& out_dir);
void cmd_chirp_scan(const RunConfig& config, const std::filesystem::path& out_dir);
void cmd_optimize(const RunConfig& config, const std::filesystem::path& out_dir);
void cmd_cluster(const RunConfig& config, const std::filesystem::path& out_dir);
void cmd_squeezing_scan(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace spdc
