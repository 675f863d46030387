#include "statbundle/expfam.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace statbundle {

namespace {

void require_dim(const ExpFamily& family, std::span<const double> theta, const char* what) {
  if (theta.size() != family.dim()) {
    std::ostringstream os;
    os << what << " has " << theta.size() << " coordinates, family dimension is " << family.dim();
    throw Error(ErrorKind::SizeMismatch, os.str());
  }
}

// theta . T at every cell of the joint space.
std::vector<double> linear_form(const ExpFamily& family, std::span<const double> theta) {
  std::vector<double> out(family.base().flat().size(), 0.0);
  for (std::size_t j = 0; j < family.dim(); ++j) {
    const auto t = family.stat(j);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += theta[j] * t[i];
  }
  return out;
}

double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// E_{G(theta)}[T_j - E T_j | X] for every j.
std::vector<FiberVector> marginal_stat_velocities(const ExpFamily& family, const JointDensity& g) {
  std::vector<FiberVector> out;
  out.reserve(family.dim());
  for (std::size_t j = 0; j < family.dim(); ++j) {
    out.push_back(marginal_derivative(g, center(g.flat(), family.stat(j))));
  }
  return out;
}

void require_left_margin(const ExpFamily& family, const Density& r1, const char* op) {
  if (!(r1.space() == family.space().left())) {
    throw Error(ErrorKind::SpaceMismatch, std::string(op) + ": target does not live on the first factor");
  }
}

}  // namespace

ExpFamily::ExpFamily(Density p1, Density p2, std::vector<std::vector<double>> raw_stats)
    : p1_(std::move(p1)), p2_(std::move(p2)), base_(product(p1_, p2_)) {
  if (raw_stats.empty()) {
    throw Error(ErrorKind::SizeMismatch, "exponential family needs at least one statistic");
  }
  const Density& base = base_.flat();
  stats_.reserve(raw_stats.size());
  for (std::size_t j = 0; j < raw_stats.size(); ++j) {
    if (raw_stats[j].size() != base.size()) {
      std::ostringstream os;
      os << "statistic " << j << " has " << raw_stats[j].size() << " cells, expected "
         << base.size();
      throw Error(ErrorKind::SizeMismatch, os.str());
    }
    const FiberVector centered = center(base, raw_stats[j]);
    stats_.emplace_back(centered.values().begin(), centered.values().end());
  }

  const auto d = static_cast<Eigen::Index>(stats_.size());
  Eigen::MatrixXd gram(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k <= j; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < base.size(); ++i) {
        s += stats_[j][i] * stats_[k][i] * base.mass(i);
      }
      gram(j, k) = gram(k, j) = s;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  min_gram_eigenvalue_ = solver.eigenvalues().minCoeff();
  if (!(min_gram_eigenvalue_ > kGramEigenFloor)) {
    std::ostringstream os;
    os << "sufficient statistics are linearly dependent (smallest Gram eigenvalue "
       << min_gram_eigenvalue_ << ")";
    throw Error(ErrorKind::Identifiability, os.str());
  }
}

ExpFamily make_expfam(const Density& p1, const Density& p2,
                      std::vector<std::vector<double>> raw_stats) {
  return ExpFamily(p1, p2, std::move(raw_stats));
}

double psi(const ExpFamily& family, std::span<const double> theta) {
  require_dim(family, theta, "theta");
  const std::vector<double> a = linear_form(family, theta);
  const double shift = *std::max_element(a.begin(), a.end());
  const Density& base = family.base().flat();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::exp(a[i] - shift) * base.mass(i);
  return shift + std::log(s);
}

JointDensity density(const ExpFamily& family, std::span<const double> theta) {
  const double normalizer = psi(family, theta);
  const std::vector<double> a = linear_form(family, theta);
  const Density& base = family.base().flat();
  std::vector<double> values(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) values[i] = std::exp(a[i] - normalizer) * base[i];
  return JointDensity(family.space(), std::move(values));
}

std::vector<double> grad_psi(const ExpFamily& family, std::span<const double> theta) {
  const JointDensity g = density(family, theta);
  std::vector<double> out(family.dim());
  for (std::size_t j = 0; j < family.dim(); ++j) out[j] = expect(g.flat(), family.stat(j));
  return out;
}

FiberVector joint_velocity(const ExpFamily& family, std::span<const double> theta,
                           std::span<const double> thetadot) {
  require_dim(family, thetadot, "thetadot");
  const JointDensity g = density(family, theta);
  return center(g.flat(), linear_form(family, thetadot));
}

FiberVector marginal_velocity(const ExpFamily& family, std::span<const double> theta,
                              std::span<const double> thetadot) {
  require_dim(family, thetadot, "thetadot");
  const JointDensity g = density(family, theta);
  return marginal_derivative(g, center(g.flat(), linear_form(family, thetadot)));
}

FiberVector conditional_velocity(const ExpFamily& family, std::span<const double> theta,
                                 std::span<const double> thetadot, std::size_t x) {
  require_dim(family, thetadot, "thetadot");
  const JointDensity g = density(family, theta);
  return conditional_derivative(g, x, center(g.flat(), linear_form(family, thetadot)));
}

std::vector<double> kl_theta_gradient_left(const ExpFamily& family, std::span<const double> theta,
                                           const Density& r1) {
  require_left_margin(family, r1, "kl_theta_gradient_left");
  const JointDensity g = density(family, theta);
  const auto velocities = marginal_stat_velocities(family, g);
  std::vector<double> out(family.dim());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -expect(r1, velocities[j].values());
  return out;
}

std::vector<double> kl_theta_gradient_right(const ExpFamily& family, std::span<const double> theta,
                                            const Density& r1, RightGradientWeighting weighting) {
  require_left_margin(family, r1, "kl_theta_gradient_right");
  const JointDensity g = density(family, theta);
  const Density g1 = marginalize(g);
  const auto velocities = marginal_stat_velocities(family, g);
  std::vector<double> out(family.dim(), 0.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    double s = 0.0;
    for (std::size_t x = 0; x < g1.size(); ++x) {
      const double w = weighting == RightGradientWeighting::Model ? g1.mass(x)
                                                                   : g1.space().weight(x);
      s += velocities[j][x] * std::log(r1[x] / g1[x]) * w;
    }
    out[j] = -s;
  }
  return out;
}

double flow_objective(const ExpFamily& family, std::span<const double> theta, const Density& r1,
                      FlowMode mode) {
  require_left_margin(family, r1, "flow_objective");
  const Density g1 = marginalize(density(family, theta));
  return mode == FlowMode::Left ? kl(r1, g1) : kl(g1, r1);
}

FlowTrace natural_gradient_flow(const ExpFamily& family, std::span<const double> theta0,
                                const Density& r1, FlowMode mode, const FlowOptions& options) {
  require_dim(family, theta0, "theta0");
  if (!(options.step > 0.0) || options.iters < 1 || options.max_halvings < 0 ||
      !(options.tol >= 0.0)) {
    throw Error(ErrorKind::Config, "flow needs step > 0, iters >= 1 and tol >= 0");
  }
  const auto gradient = [&](std::span<const double> theta) {
    return mode == FlowMode::Left ? kl_theta_gradient_left(family, theta, r1)
                                  : kl_theta_gradient_right(family, theta, r1);
  };
  const auto objective = [&](std::span<const double> theta) {
    const double value = flow_objective(family, theta, r1, mode);
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::NonFinite, "flow objective became non-finite");
    }
    return value;
  };

  FlowTrace trace;
  std::vector<double> theta(theta0.begin(), theta0.end());
  double value = objective(theta);
  std::vector<double> grad = gradient(theta);
  double grad_norm = euclidean_norm(grad);
  trace.records.push_back({0, theta, value, grad_norm, 0.0});

  for (int k = 1; k <= options.iters && !(grad_norm < options.tol); ++k) {
    double step = options.step;
    std::vector<double> next(theta.size());
    double next_value = 0.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= options.max_halvings; ++halvings, step *= 0.5) {
      for (std::size_t j = 0; j < theta.size(); ++j) next[j] = theta[j] - step * grad[j];
      next_value = objective(next);
      if (next_value <= value) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    theta = std::move(next);
    value = next_value;
    grad = gradient(theta);
    grad_norm = euclidean_norm(grad);
    trace.records.push_back({k, theta, value, grad_norm, step});
  }
  trace.converged = grad_norm < options.tol;
  return trace;
}

}  // namespace statbundle
