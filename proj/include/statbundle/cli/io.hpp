#pragma once

// JSON inputs and CSV outputs for the command-line front end.
//
//   space   = {"weights": [...]}
//   density = {"space": space, "values": [...]}
//   joint   = {"left": space, "right": space, "values": [[...], ...]}
//   family  = {"left": space, "right": space, "base1": [...], "base2": [...],
//              "stats": [[[...], ...], ...]}
//   joint velocity = {"values": [[...], ...]}

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "statbundle/expfam.hpp"

namespace statbundle::cli {

using Json = nlohmann::json;
using Table = std::vector<std::vector<double>>;

Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& doc);

SampleSpace parse_space(const Json& doc);
Density parse_density(const Json& doc);
JointDensity parse_joint(const Json& doc);
/// Validates that the table is a fiber vector at q12.
FiberVector parse_joint_velocity(const Json& doc, const JointDensity& q12);
ExpFamily parse_family(const Json& doc);

Json space_json(const SampleSpace& space);
Json density_json(const Density& q);
Json joint_json(const ProductSpace& space, const Table& values);
Json velocity_json(const Table& values);
Json family_json(const ProductSpace& space, const std::vector<double>& base1,
                 const std::vector<double>& base2, const std::vector<Table>& stats);

/// Round-trip-safe decimal, 17 significant digits.
std::string format_number(double value);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace statbundle::cli
