#include "statbundle/charts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace statbundle {

namespace {

constexpr double kInverseDriftLimit = 1e-10;

void require_based_at(const FiberVector& v, const Density& p, const char* op) {
  if (!(v.base() == p)) {
    throw Error(ErrorKind::BaseMismatch, std::string(op) + ": vector is not based at the chart center");
  }
}

void require_same_space(const Density& p, const Density& q, const char* op) {
  if (!(p.space() == q.space())) {
    throw Error(ErrorKind::SpaceMismatch, std::string(op) + ": densities live on different spaces");
  }
}

}  // namespace

double cumulant(const Density& p, const FiberVector& u) {
  require_based_at(u, p, "cumulant");
  const auto values = u.values();
  const double shift = *std::max_element(values.begin(), values.end());
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) s += std::exp(values[x] - shift) * p.mass(x);
  return shift + std::log(s);
}

FiberVector exp_chart(const Density& p, const Density& q) {
  require_same_space(p, q, "exp_chart");
  std::vector<double> log_ratio(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) log_ratio[x] = std::log(q[x] / p[x]);
  return center(p, log_ratio, Polarity::Exponential);
}

Density exp_chart_inv(const Density& p, const FiberVector& v) {
  require_based_at(v, p, "exp_chart_inv");
  const double k = cumulant(p, v);
  std::vector<double> values(p.size());
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    values[x] = std::exp(v[x] - k) * p[x];
    total += values[x] * p.space().weight(x);
  }
  if (std::abs(total - 1.0) > kInverseDriftLimit) {
    std::ostringstream os;
    os.precision(17);
    os << "exp_chart_inv: reconstructed mass " << total << " drifted beyond tolerance";
    throw Error(ErrorKind::Normalization, os.str());
  }
  for (double& value : values) value /= total;
  return Density(p.space(), std::move(values));
}

FiberVector mix_chart(const Density& p, const Density& q) {
  require_same_space(p, q, "mix_chart");
  std::vector<double> values(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) values[x] = q[x] / p[x] - 1.0;
  return FiberVector(p, std::move(values), Polarity::Mixture);
}

Density mix_chart_inv(const Density& p, const FiberVector& w) {
  require_based_at(w, p, "mix_chart_inv");
  std::vector<double> values(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double factor = 1.0 + w[x];
    if (!(factor > 0.0)) {
      std::ostringstream os;
      os << "mix_chart_inv: 1 + w = " << factor << " at index " << x
         << "; point leaves the mixture chart image";
      throw Error(ErrorKind::Boundary, os.str());
    }
    values[x] = factor * p[x];
  }
  return Density(p.space(), std::move(values));
}

FiberVector e_transport(const Density& p, const Density& q, const FiberVector& v) {
  require_same_space(p, q, "e_transport");
  require_based_at(v, p, "e_transport");
  return center(q, v.values(), v.polarity());
}

FiberVector m_transport(const Density& p, const Density& q, const FiberVector& w) {
  require_same_space(p, q, "m_transport");
  require_based_at(w, p, "m_transport");
  std::vector<double> values(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) values[x] = p[x] / q[x] * w[x];
  return FiberVector(q, std::move(values), w.polarity());
}

FiberVector score_velocity(const Curve& curve, double t, double h) {
  if (!(h > 0.0) || t - h < curve.t0 || t + h > curve.t1) {
    std::ostringstream os;
    os << "score_velocity: [" << t - h << ", " << t + h << "] is outside the curve domain ["
       << curve.t0 << ", " << curve.t1 << "]";
    throw Error(ErrorKind::Domain, os.str());
  }
  const Density here = curve(t);
  const Density ahead = curve(t + h);
  const Density behind = curve(t - h);
  std::vector<double> score(here.size());
  for (std::size_t x = 0; x < here.size(); ++x) {
    score[x] = (std::log(ahead[x]) - std::log(behind[x])) / (2.0 * h);
  }
  return center(here, score, Polarity::Exponential);
}

}  // namespace statbundle
