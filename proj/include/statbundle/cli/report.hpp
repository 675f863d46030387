#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace statbundle::cli {

struct CheckRecord {
  std::string name;
  double threshold = 0.0;
  std::size_t instances = 0;
  double max_residual = 0.0;
  bool saw_nan = false;

  void observe(double residual);
  [[nodiscard]] bool pass() const noexcept;
};

struct Report {
  std::vector<CheckRecord> checks;
  double wall_seconds = 0.0;

  /// Finds the check by name, adding it with `threshold` on first use.
  CheckRecord& check(const std::string& name, double threshold);
  [[nodiscard]] bool overall() const noexcept;

  void print(std::ostream& out) const;
  /// Per-check CSV; wall time is left out so reruns compare byte-for-byte.
  void write_csv(const std::filesystem::path& path) const;
};

}  // namespace statbundle::cli
