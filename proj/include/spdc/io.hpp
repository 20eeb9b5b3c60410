#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace spdc {

// CSV with a header row; numbers serialized with 17 significant digits so
// regression diffs are exact.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void write_row(const std::vector<double>& values);
  void write_row(const std::vector<std::string>& cells);

  static std::string format(double value);

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// Raw little-endian float64 (re, im) pairs, row major.
void dump_complex_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m);

}  // namespace spdc
