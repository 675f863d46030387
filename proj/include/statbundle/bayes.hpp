#pragma once

// Marginalization and conditioning on a product space, read as maps between
// maximal exponential models, together with their bundle derivatives.
//
// The derivative of a map f is computed in mixture charts: with centers p on
// the source and p' on the target, and chart expression f_{p,p'},
//
//   df(q)[v] = mU_{p'}^{f(q)} d f_{p,p'}(eta_p(q)) [mU_q^p v].
//
// The closed forms (conditional expectation, centered sections) are what
// marginal_derivative and conditional_derivative return; the *_via_charts
// functions run the chart pipeline above and exist to cross-check them.

#include <cstddef>
#include <vector>

#include "statbundle/charts.hpp"
#include "statbundle/divergence.hpp"

namespace statbundle {

/// q1(x) = sum_z q12(x, z) mu2(z).
Density marginalize(const JointDensity& q12);

/// E_q12[v | X], a vector in the fiber at q1.
FiberVector marginal_derivative(const JointDensity& q12, const FiberVector& v);

/// q_{2|1}(. | x) = q12(x, .) / q1(x).
Density condition(const JointDensity& q12, std::size_t x);

/// v(x, .) - E_{q_{2|1}(.|x)} v(x, .), in the fiber at condition(q12, x).
FiberVector conditional_derivative(const JointDensity& q12, std::size_t x, const FiberVector& v);

/// Marginalization read in the mixture charts at p1 (x) p2 and p1:
/// v -> sum_z v(., z) p2(z) mu2(z). `v` is based at product(p1, p2).flat().
FiberVector marginal_chart_expression(const Density& p1, const Density& p2, const FiberVector& v);

/// Conditioning on x read in the mixture charts at p1 (x) p2 and p2:
/// (v(x, .) - m) / (1 + m) with m = sum_z v(x, z) p2(z) mu2(z).
/// Throws ErrorKind::Boundary if 1 + m <= 0.
FiberVector chart_expression_Fx(const Density& p1, const Density& p2, std::size_t x,
                                const FiberVector& v);

/// Directional derivative of chart_expression_Fx at v in direction h.
FiberVector chart_expression_Fx_derivative(const Density& p1, const Density& p2, std::size_t x,
                                           const FiberVector& v, const FiberVector& h);

/// marginal_derivative computed through the chart expression and transports.
FiberVector marginal_derivative_via_charts(const Density& p1, const Density& p2,
                                           const JointDensity& q12, const FiberVector& v);

/// conditional_derivative computed through chart_expression_Fx_derivative and
/// transports.
FiberVector conditional_derivative_via_charts(const Density& p1, const Density& p2,
                                              const JointDensity& q12, std::size_t x,
                                              const FiberVector& v);

/// How the conditional-divergence term is averaged over the first factor.
enum class DecompositionCentering {
  /// sum_x K(x) p1(x) mu1(x); the version under which E_{p1 (x) p2} u12 = 0.
  Weighted,
  /// sum_x K(x) mu1(x) with no p1 weight.
  Unweighted,
};

struct ExpDecomposition {
  std::vector<double> u12;        // s_{p1 (x) p2}(q12), row-major
  std::vector<double> u1;         // s_{p1}(q1)
  std::vector<double> u21;        // s_{p2}(q_{2|1}(.|x)) in row x, row-major
  std::vector<double> centering;  // K(x) - average, subtracted in row x
  double residual = 0.0;          // max |u12 - u1 - u21 + centering|
};

/// with K(x) = D(p2 || q_{2|1}(.|x)).
ExpDecomposition exp_decompose(const Density& p1, const Density& p2, const JointDensity& q12,
                               DecompositionCentering centering = DecompositionCentering::Weighted);

struct KlChain {
  double lhs = 0.0;               // D(p1 (x) p2 || q12)
  double marginal_term = 0.0;     // D(p1 || q1)
  double conditional_term = 0.0;  // E_{p1} D(p2 || q_{2|1}(.|X))

  [[nodiscard]] double residual() const noexcept;
};

KlChain kl_chain(const Density& p1, const Density& p2, const JointDensity& q12);

}  // namespace statbundle
