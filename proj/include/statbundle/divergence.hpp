#pragma once

// Kullback-Leibler divergence and its natural gradients in both arguments.

#include <span>
#include <vector>

#include "statbundle/charts.hpp"

namespace statbundle {

/// D(q || r) = E_q log(q/r).
double kl(const Density& q, const Density& r);

/// Rebuilds q as exp(s_p(q) - D(p || q)) p.
Density structural_reconstruct(const Density& p, const Density& q);

/// Natural gradient in the first slot, -s_q(r), in the fiber at q.
FiberVector grad1_kl(const Density& q, const Density& r);

/// Natural gradient in the second slot, -eta_r(q), in the predual fiber at r.
FiberVector grad2_kl(const Density& q, const Density& r);

/// d/dt D(q(t) || r(t)) = <qdot, grad1>_q + <grad2, rdot>_r.
double kl_curve_derivative(const Density& q, const FiberVector& qdot, const Density& r,
                           const FiberVector& rdot);

enum class CommonParamForm {
  /// int (log(M/N) grad M + (N - M) grad log N) dmu, the derivative of D(M || N).
  Derivative,
  /// log(N/M) in place of log(M/N) in the first term. Kept for comparison;
  /// it differs from the derivative by a sign on that term.
  ReversedLogRatio,
};

/// Gradient of theta -> D(M(theta) || N(theta)) from the log-density partials
/// dlogM[j] = d_j log M and dlogN[j] = d_j log N evaluated at theta.
std::vector<double> common_param_gradient(const Density& M, const Density& N,
                                          std::span<const std::vector<double>> dlogM,
                                          std::span<const std::vector<double>> dlogN,
                                          CommonParamForm form = CommonParamForm::Derivative);

}  // namespace statbundle
