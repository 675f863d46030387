#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "statbundle/bayes.hpp"
#include "statbundle/cli/report.hpp"
#include "statbundle/expfam.hpp"

namespace statbundle::cli {

struct BayesOutcome {
  KlChain chain;
  double decomposition_residual = 0.0;

  [[nodiscard]] bool pass() const noexcept;
};

/// Writes marginal.csv, conditionals.csv, kl_chain.csv and
/// exp_decomposition.csv (uniform reference densities on both factors), plus
/// marginal_derivative.csv and conditional_derivative.csv when a velocity
/// file is given.
BayesOutcome cmd_bayes(const std::filesystem::path& joint_path,
                       const std::optional<std::filesystem::path>& velocity_path,
                       const std::filesystem::path& out_dir, std::ostream& log);

struct FlowCommand {
  std::filesystem::path family_path;
  std::filesystem::path target_path;
  FlowMode mode = FlowMode::Left;
  std::vector<double> theta0;
  FlowOptions options;
  std::filesystem::path out_dir;
};

/// Writes flow_trace.csv and flow_summary.csv.
FlowTrace cmd_flow(const FlowCommand& cmd, std::ostream& log);

struct DemoOutcome {
  Report verify;
  BayesOutcome bayes;
  bool flow_left_converged = false;
  bool flow_right_converged = false;

  [[nodiscard]] bool pass() const noexcept;
};

/// Writes the reference fixtures under <out>/fixtures and runs verify, bayes
/// and flow on them into <out>/verify, <out>/bayes, <out>/flow_left and
/// <out>/flow_right.
DemoOutcome cmd_demo(const std::filesystem::path& out_dir, std::uint64_t seed, std::ostream& log);

}  // namespace statbundle::cli
