#include "statbundle/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace statbundle {

namespace {

void require_row(const JointDensity& q12, std::size_t x) {
  if (x >= q12.rows()) {
    std::ostringstream os;
    os << "outcome index " << x << " is out of range for a first factor with " << q12.rows()
       << " outcomes";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
}

void require_at_joint(const JointDensity& q12, const FiberVector& v, const char* op) {
  if (!(v.base() == q12.flat())) {
    throw Error(ErrorKind::BaseMismatch, std::string(op) + ": vector is not based at the joint density");
  }
}

void require_factors(const Density& p1, const Density& p2, const ProductSpace& space,
                     const char* op) {
  if (!(p1.space() == space.left()) || !(p2.space() == space.right())) {
    throw Error(ErrorKind::SpaceMismatch,
                std::string(op) + ": reference densities do not match the product factors");
  }
}

// p2-average of the x-section of a vector on the product space.
double section_mean(const Density& p2, std::size_t x, std::span<const double> v) {
  const std::size_t n2 = p2.size();
  double m = 0.0;
  for (std::size_t z = 0; z < n2; ++z) m += v[x * n2 + z] * p2.mass(z);
  return m;
}

}  // namespace

Density marginalize(const JointDensity& q12) {
  const SampleSpace& right = q12.space().right();
  std::vector<double> q1(q12.rows(), 0.0);
  for (std::size_t x = 0; x < q12.rows(); ++x) {
    for (std::size_t z = 0; z < q12.cols(); ++z) q1[x] += q12(x, z) * right.weight(z);
  }
  return Density(q12.space().left(), std::move(q1));
}

FiberVector marginal_derivative(const JointDensity& q12, const FiberVector& v) {
  require_at_joint(q12, v, "marginal_derivative");
  const Density q1 = marginalize(q12);
  const SampleSpace& right = q12.space().right();
  const std::size_t n2 = q12.cols();
  std::vector<double> out(q12.rows(), 0.0);
  for (std::size_t x = 0; x < q12.rows(); ++x) {
    double s = 0.0;
    for (std::size_t z = 0; z < n2; ++z) s += v[x * n2 + z] * q12(x, z) * right.weight(z);
    out[x] = s / q1[x];
  }
  return FiberVector(q1, std::move(out), v.polarity());
}

Density condition(const JointDensity& q12, std::size_t x) {
  require_row(q12, x);
  const SampleSpace& right = q12.space().right();
  double q1x = 0.0;
  for (std::size_t z = 0; z < q12.cols(); ++z) q1x += q12(x, z) * right.weight(z);
  std::vector<double> out(q12.cols());
  for (std::size_t y = 0; y < q12.cols(); ++y) out[y] = q12(x, y) / q1x;
  return Density(right, std::move(out));
}

FiberVector conditional_derivative(const JointDensity& q12, std::size_t x, const FiberVector& v) {
  require_row(q12, x);
  require_at_joint(q12, v, "conditional_derivative");
  const Density cond = condition(q12, x);
  const std::size_t n2 = q12.cols();
  const auto section = v.values().subspan(x * n2, n2);
  return center(cond, section, v.polarity());
}

FiberVector marginal_chart_expression(const Density& p1, const Density& p2, const FiberVector& v) {
  const JointDensity base = product(p1, p2);
  if (!(v.base() == base.flat())) {
    throw Error(ErrorKind::BaseMismatch, "marginal_chart_expression: vector is not based at p1 (x) p2");
  }
  std::vector<double> out(p1.size());
  for (std::size_t x = 0; x < p1.size(); ++x) out[x] = section_mean(p2, x, v.values());
  return FiberVector(p1, std::move(out), Polarity::Mixture);
}

FiberVector chart_expression_Fx(const Density& p1, const Density& p2, std::size_t x,
                                const FiberVector& v) {
  const JointDensity base = product(p1, p2);
  require_row(base, x);
  if (!(v.base() == base.flat())) {
    throw Error(ErrorKind::BaseMismatch, "chart_expression_Fx: vector is not based at p1 (x) p2");
  }
  const double m = section_mean(p2, x, v.values());
  const double denom = 1.0 + m;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "chart_expression_Fx: denominator 1 + m = " << denom << " at x = " << x;
    throw Error(ErrorKind::Boundary, os.str());
  }
  const std::size_t n2 = p2.size();
  std::vector<double> out(n2);
  for (std::size_t y = 0; y < n2; ++y) out[y] = (v[x * n2 + y] - m) / denom;
  return FiberVector(p2, std::move(out), Polarity::Mixture);
}

FiberVector chart_expression_Fx_derivative(const Density& p1, const Density& p2, std::size_t x,
                                           const FiberVector& v, const FiberVector& h) {
  const FiberVector fx = chart_expression_Fx(p1, p2, x, v);
  if (!(h.base() == v.base())) {
    throw Error(ErrorKind::BaseMismatch, "chart_expression_Fx_derivative: direction not at p1 (x) p2");
  }
  const double m = section_mean(p2, x, v.values());
  const double mh = section_mean(p2, x, h.values());
  const std::size_t n2 = p2.size();
  std::vector<double> out(n2);
  for (std::size_t y = 0; y < n2; ++y) out[y] = (h[x * n2 + y] - mh - fx[y] * mh) / (1.0 + m);
  return FiberVector(p2, std::move(out), Polarity::Mixture);
}

FiberVector marginal_derivative_via_charts(const Density& p1, const Density& p2,
                                           const JointDensity& q12, const FiberVector& v) {
  require_factors(p1, p2, q12.space(), "marginal_derivative_via_charts");
  require_at_joint(q12, v, "marginal_derivative_via_charts");
  const JointDensity base = product(p1, p2);
  const FiberVector h = m_transport(q12.flat(), base.flat(), v);
  // The chart expression is linear, so it is its own derivative.
  const FiberVector dm = marginal_chart_expression(p1, p2, h);
  return m_transport(p1, marginalize(q12), dm);
}

FiberVector conditional_derivative_via_charts(const Density& p1, const Density& p2,
                                              const JointDensity& q12, std::size_t x,
                                              const FiberVector& v) {
  require_factors(p1, p2, q12.space(), "conditional_derivative_via_charts");
  require_at_joint(q12, v, "conditional_derivative_via_charts");
  const JointDensity base = product(p1, p2);
  const FiberVector at = mix_chart(base.flat(), q12.flat());
  const FiberVector h = m_transport(q12.flat(), base.flat(), v);
  const FiberVector dF = chart_expression_Fx_derivative(p1, p2, x, at, h);
  return m_transport(p2, condition(q12, x), dF);
}

ExpDecomposition exp_decompose(const Density& p1, const Density& p2, const JointDensity& q12,
                               DecompositionCentering centering) {
  require_factors(p1, p2, q12.space(), "exp_decompose");
  const JointDensity base = product(p1, p2);
  const std::size_t n1 = q12.rows();
  const std::size_t n2 = q12.cols();

  ExpDecomposition out;
  const FiberVector u12 = exp_chart(base.flat(), q12.flat());
  out.u12.assign(u12.values().begin(), u12.values().end());
  const FiberVector u1 = exp_chart(p1, marginalize(q12));
  out.u1.assign(u1.values().begin(), u1.values().end());

  out.u21.resize(n1 * n2);
  std::vector<double> cond_kl(n1);
  for (std::size_t x = 0; x < n1; ++x) {
    const Density cond = condition(q12, x);
    const FiberVector u21 = exp_chart(p2, cond);
    std::copy(u21.values().begin(), u21.values().end(), out.u21.begin() + x * n2);
    cond_kl[x] = kl(p2, cond);
  }

  double average = 0.0;
  for (std::size_t x = 0; x < n1; ++x) {
    const double w = centering == DecompositionCentering::Weighted ? p1.mass(x)
                                                                    : p1.space().weight(x);
    average += cond_kl[x] * w;
  }
  out.centering.resize(n1);
  for (std::size_t x = 0; x < n1; ++x) out.centering[x] = cond_kl[x] - average;

  for (std::size_t x = 0; x < n1; ++x) {
    for (std::size_t y = 0; y < n2; ++y) {
      const std::size_t i = x * n2 + y;
      const double rhs = out.u1[x] + out.u21[i] - out.centering[x];
      out.residual = std::max(out.residual, std::abs(out.u12[i] - rhs));
    }
  }
  return out;
}

double KlChain::residual() const noexcept {
  return std::abs(lhs - (marginal_term + conditional_term));
}

KlChain kl_chain(const Density& p1, const Density& p2, const JointDensity& q12) {
  require_factors(p1, p2, q12.space(), "kl_chain");
  KlChain out;
  out.lhs = kl(product(p1, p2).flat(), q12.flat());
  out.marginal_term = kl(p1, marginalize(q12));
  for (std::size_t x = 0; x < q12.rows(); ++x) {
    out.conditional_term += p1.mass(x) * kl(p2, condition(q12, x));
  }
  return out;
}

}  // namespace statbundle
