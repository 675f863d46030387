#pragma once

// Exponential families on a product space,
//
//   G(theta) = exp(theta . T - psi(theta)) p1 (x) p2,
//
// with sufficient statistics T_j centered under p1 (x) p2, and the velocities
// and KL gradients of the model, its margin and its conditionals.

#include <cstddef>
#include <span>
#include <vector>

#include "statbundle/bayes.hpp"

namespace statbundle {

/// Smallest admissible eigenvalue of the statistics' Gram matrix.
inline constexpr double kGramEigenFloor = 1e-10;

class ExpFamily {
 public:
  /// Each raw statistic is a row-major n1 * n2 table. Statistics are centered
  /// under p1 (x) p2; throws ErrorKind::Identifiability when their Gram matrix
  /// <T_j, T_k> is numerically singular.
  ExpFamily(Density p1, Density p2, std::vector<std::vector<double>> raw_stats);

  [[nodiscard]] const ProductSpace& space() const noexcept { return base_.space(); }
  [[nodiscard]] const Density& base1() const noexcept { return p1_; }
  [[nodiscard]] const Density& base2() const noexcept { return p2_; }
  [[nodiscard]] const JointDensity& base() const noexcept { return base_; }
  [[nodiscard]] std::size_t dim() const noexcept { return stats_.size(); }
  [[nodiscard]] std::span<const double> stat(std::size_t j) const { return stats_[j]; }
  [[nodiscard]] double min_gram_eigenvalue() const noexcept { return min_gram_eigenvalue_; }

 private:
  Density p1_;
  Density p2_;
  JointDensity base_;
  std::vector<std::vector<double>> stats_;
  double min_gram_eigenvalue_ = 0.0;
};

ExpFamily make_expfam(const Density& p1, const Density& p2,
                      std::vector<std::vector<double>> raw_stats);

/// log E_{p1 (x) p2} exp(theta . T), with a max shift.
double psi(const ExpFamily& family, std::span<const double> theta);

JointDensity density(const ExpFamily& family, std::span<const double> theta);

/// E_{G(theta)} T.
std::vector<double> grad_psi(const ExpFamily& family, std::span<const double> theta);

/// (T - E_{G(theta)} T) . thetadot, in the fiber at G(theta).
FiberVector joint_velocity(const ExpFamily& family, std::span<const double> theta,
                           std::span<const double> thetadot);

/// E_{G(theta)}[T - E T | X] . thetadot, in the fiber at the margin G1(theta).
FiberVector marginal_velocity(const ExpFamily& family, std::span<const double> theta,
                              std::span<const double> thetadot);

/// (T(x, .) - E_{G_{2|1}(.|x)} T(x, .)) . thetadot.
FiberVector conditional_velocity(const ExpFamily& family, std::span<const double> theta,
                                 std::span<const double> thetadot, std::size_t x);

/// Gradient of theta -> D(r1 || G1(theta)).
std::vector<double> kl_theta_gradient_left(const ExpFamily& family, std::span<const double> theta,
                                           const Density& r1);

enum class RightGradientWeighting {
  /// Integrand weighted by G1(theta) mu1: the derivative of D(G1(theta) || r1).
  Model,
  /// Integrand against mu1 alone. Not a gradient in general.
  Unweighted,
};

/// Gradient of theta -> D(G1(theta) || r1).
std::vector<double> kl_theta_gradient_right(
    const ExpFamily& family, std::span<const double> theta, const Density& r1,
    RightGradientWeighting weighting = RightGradientWeighting::Model);

enum class FlowMode { Left, Right };

/// D(r1 || G1(theta)) for Left, D(G1(theta) || r1) for Right.
double flow_objective(const ExpFamily& family, std::span<const double> theta, const Density& r1,
                      FlowMode mode);

struct FlowOptions {
  double step = 0.5;
  int iters = 200;
  double tol = 1e-10;
  int max_halvings = 30;
};

struct FlowRecord {
  int iteration = 0;
  std::vector<double> theta;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  // step actually taken to reach this record; 0 for the start
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  bool converged = false;
};

/// Euler descent theta <- theta - step * grad with step halving whenever the
/// objective would increase. Stops once the gradient norm drops below tol.
FlowTrace natural_gradient_flow(const ExpFamily& family, std::span<const double> theta0,
                                const Density& r1, FlowMode mode, const FlowOptions& options);

}  // namespace statbundle
