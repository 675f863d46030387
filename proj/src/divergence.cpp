#include "statbundle/divergence.hpp"

#include <cmath>
#include <string>

namespace statbundle {

double kl(const Density& q, const Density& r) {
  if (!(q.space() == r.space())) {
    throw Error(ErrorKind::SpaceMismatch, "kl: densities live on different spaces");
  }
  // sum q log(q/r) mu rewritten as sum r phi(q/r - 1) mu with
  // phi(t) = (1 + t) log1p(t) - t >= 0, equal for q and r of equal mass.
  // Every term is nonnegative and stays accurate as q -> r.
  double s = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    const double t = (q[x] - r[x]) / r[x];
    s += r.mass(x) * ((1.0 + t) * std::log1p(t) - t);
  }
  return s;
}

Density structural_reconstruct(const Density& p, const Density& q) {
  const FiberVector s = exp_chart(p, q);
  const double d = kl(p, q);
  std::vector<double> values(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) values[x] = std::exp(s[x] - d) * p[x];
  return Density(p.space(), std::move(values));
}

FiberVector grad1_kl(const Density& q, const Density& r) { return -exp_chart(q, r); }

FiberVector grad2_kl(const Density& q, const Density& r) { return -mix_chart(r, q); }

double kl_curve_derivative(const Density& q, const FiberVector& qdot, const Density& r,
                           const FiberVector& rdot) {
  return pairing(q, qdot, grad1_kl(q, r)) + pairing(r, grad2_kl(q, r), rdot);
}

std::vector<double> common_param_gradient(const Density& M, const Density& N,
                                          std::span<const std::vector<double>> dlogM,
                                          std::span<const std::vector<double>> dlogN,
                                          CommonParamForm form) {
  if (!(M.space() == N.space())) {
    throw Error(ErrorKind::SpaceMismatch, "common_param_gradient: M and N on different spaces");
  }
  if (dlogM.size() != dlogN.size()) {
    throw Error(ErrorKind::SizeMismatch, "common_param_gradient: " + std::to_string(dlogM.size()) +
                                             " partials for M but " + std::to_string(dlogN.size()) +
                                             " for N");
  }
  const double sign = form == CommonParamForm::Derivative ? 1.0 : -1.0;
  std::vector<double> grad(dlogM.size(), 0.0);
  for (std::size_t j = 0; j < grad.size(); ++j) {
    if (dlogM[j].size() != M.size() || dlogN[j].size() != M.size()) {
      throw Error(ErrorKind::SizeMismatch,
                  "common_param_gradient: partial " + std::to_string(j) + " has wrong length");
    }
    double g = 0.0;
    for (std::size_t x = 0; x < M.size(); ++x) {
      const double log_ratio = sign * std::log(M[x] / N[x]);
      g += M.space().weight(x) *
           (log_ratio * M[x] * dlogM[j][x] + (N[x] - M[x]) * dlogN[j][x]);
    }
    grad[j] = g;
  }
  return grad;
}

}  // namespace statbundle
