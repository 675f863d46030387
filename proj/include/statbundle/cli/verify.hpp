#pragma once

// The randomized verification suite behind `statbundle verify`: every
// identity and derivative formula of the library checked on seeded random
// instances, exact identities to round-off and derivatives against central
// differences.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "statbundle/cli/report.hpp"

namespace statbundle::cli {

using SizePair = std::pair<std::size_t, std::size_t>;

struct VerifyConfig {
  std::uint64_t seed = 42;
  int trials = 25;
  std::vector<SizePair> sizes{{2, 2}, {3, 4}};
  double identity_tol = 1e-12;
  double pipeline_tol = 1e-10;
  double fd_tol = 1e-6;
  double fd_step = 1e-5;
  /// Extra reference density whose space gets the single-space checks.
  std::optional<std::filesystem::path> density_path;

  /// Throws ErrorKind::Config on trials < 1, factor sizes < 2 or tolerances <= 0.
  void validate() const;
};

/// Parses "2x2,3x4".
std::vector<SizePair> parse_sizes(const std::string& text);

Report run_verify(const VerifyConfig& cfg);

}  // namespace statbundle::cli
