#include <cmath>

#include "doctest.h"
#include "statbundle/expfam.hpp"
#include "statbundle/fd.hpp"
#include "statbundle/sampling.hpp"
#include "test_support.hpp"

using namespace statbundle;
using testing::max_abs_diff;

namespace {

ExpFamily fixture_c() {
  const Density u = testing::uniform_coin();
  return ExpFamily(u, u, {{1.0, -1.0, -1.0, 1.0}});
}

ExpFamily fixture_c_prime() {
  const Density u = testing::uniform_coin();
  return ExpFamily(u, u, {{1.0, 1.0, -1.0, -1.0}});
}

ExpFamily random_family(std::uint64_t seed, std::size_t n1, std::size_t n2, std::size_t d) {
  const Density p1 = random_density(random_space(n1, derive_seed(seed, 0)), derive_seed(seed, 1));
  const Density p2 = random_density(random_space(n2, derive_seed(seed, 2)), derive_seed(seed, 3));
  std::vector<std::vector<double>> stats;
  for (std::size_t j = 0; j < d; ++j) {
    stats.push_back(random_normal_vector(n1 * n2, derive_seed(seed, 10 + j)));
  }
  return ExpFamily(p1, p2, std::move(stats));
}

std::vector<double> scaled(std::vector<double> v, double s) {
  for (double& x : v) x *= s;
  return v;
}

std::vector<double> as_vector(std::span<const double> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("fixture C") {
  const ExpFamily c = fixture_c();
  const std::vector<double> one{1.0};
  CHECK(std::abs(psi(c, one) - 0.433780830483027) <= 1e-14);
  CHECK(std::abs(grad_psi(c, one)[0] - 0.761594155955765) <= 1e-14);

  const JointDensity g = density(c, one);
  CHECK(max_abs_diff(g.flat().values(),
                     std::vector<double>{1.76159415595576, 0.238405844044235, 0.238405844044235,
                                         1.76159415595576}) <= 1e-13);
  CHECK(max_abs_diff(marginalize(g).values(), std::vector<double>{1.0, 1.0}) <= 1e-14);
  CHECK(max_abs_diff(marginal_velocity(c, one, one).values(), std::vector<double>{0, 0}) <= 1e-14);

  const Density u = testing::uniform_coin();
  CHECK(std::abs(kl_theta_gradient_left(c, one, u)[0]) <= 1e-14);
  CHECK(std::abs(kl_theta_gradient_right(c, one, u)[0]) <= 1e-14);
}

TEST_CASE("fixture C' margins and gradients") {
  const ExpFamily c = fixture_c_prime();
  const Density u = testing::uniform_coin();
  for (double t : {-1.2, 0.0, 0.5, 1.0, 2.0}) {
    const std::vector<double> theta{t};
    const double th = std::tanh(t);
    CHECK(max_abs_diff(marginal_velocity(c, theta, std::vector<double>{1.0}).values(),
                       std::vector<double>{1 - th, -1 - th}) <= 1e-14);
    CHECK(std::abs(kl_theta_gradient_left(c, theta, u)[0] - th) <= 1e-14);
    // D(G1 || uniform) = t tanh t - log cosh t.
    CHECK(std::abs(kl_theta_gradient_right(c, theta, u)[0] - t / (std::cosh(t) * std::cosh(t))) <=
          1e-14);
  }
}

TEST_CASE("right gradient weighting") {
  const ExpFamily c = fixture_c_prime();
  const Density target(testing::coin(), {1.5, 0.5});
  const std::vector<double> theta{0.8};
  const auto objective = [&](std::span<const double> th) {
    return flow_objective(c, th, target, FlowMode::Right);
  };
  const double fd = fd::fd_gradient(objective, theta)[0];
  CHECK(std::abs(kl_theta_gradient_right(c, theta, target)[0] - fd) <= 1e-8);
  CHECK(std::abs(kl_theta_gradient_right(c, theta, target, RightGradientWeighting::Unweighted)[0] -
                 fd) > 1e-2);
  CHECK(std::abs(kl_theta_gradient_right(c, std::vector<double>{std::atanh(0.5)}, target)[0]) <=
        1e-14);
}

TEST_CASE("identifiability") {
  const Density u = testing::uniform_coin();
  const std::vector<double> t{1.0, -1.0, -1.0, 1.0};
  try {
    ExpFamily(u, u, {t, scaled(t, 2.0)});
    FAIL("dependent statistics accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Identifiability);
  }
  CHECK_THROWS_AS(ExpFamily(u, u, {{1.0, 1.0, 1.0, 1.0}}), Error);
  CHECK_THROWS_AS(ExpFamily(u, u, {}), Error);
  CHECK_THROWS_AS(ExpFamily(u, u, {{1.0, 2.0}}), Error);
  CHECK(fixture_c().min_gram_eigenvalue() == doctest::Approx(1.0));
}

TEST_CASE("statistics are centered under the base") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ExpFamily f = random_family(seed, 3, 4, 3);
    for (std::size_t j = 0; j < f.dim(); ++j) CHECK(std::abs(expect(f.base().flat(), f.stat(j))) <= 1e-14);
    const std::vector<double> zero(3, 0.0);
    CHECK(std::abs(psi(f, zero)) <= 1e-15);
    CHECK(max_abs_diff(density(f, zero).flat().values(), f.base().flat().values()) <= 1e-15);
  }
}

TEST_CASE("psi is convex along random segments") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ExpFamily f = random_family(seed, 2 + seed % 4, 2 + seed % 3, 2);
    const auto a = random_normal_vector(2, derive_seed(seed, 100));
    const auto b = random_normal_vector(2, derive_seed(seed, 101));
    const std::vector<double> mid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
    CHECK(psi(f, mid) <= (psi(f, a) + psi(f, b)) / 2 + 1e-15);
  }
}

TEST_CASE("velocities compose with the bayes derivatives") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ExpFamily f = random_family(seed, 3, 3, 2);
    const auto theta = random_normal_vector(2, derive_seed(seed, 50), 0.7);
    const auto dot = random_normal_vector(2, derive_seed(seed, 51));
    const JointDensity g = density(f, theta);
    const FiberVector v = joint_velocity(f, theta, dot);
    CHECK(max_abs_diff(marginal_velocity(f, theta, dot).values(), marginal_derivative(g, v).values()) <=
          1e-14);
    for (std::size_t x = 0; x < 3; ++x) {
      CHECK(max_abs_diff(conditional_velocity(f, theta, dot, x).values(),
                         conditional_derivative(g, x, v).values()) <= 1e-14);
    }
  }
}

TEST_CASE("derivatives agree with finite differences") {
  double worst = 0.0;
  for (std::size_t n1 : {2, 3, 5}) {
    for (std::size_t n2 : {2, 4}) {
      for (std::size_t d = 1; d <= 3; ++d) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          const std::uint64_t s = seed * 1000 + n1 * 100 + n2 * 10 + d;
          const ExpFamily f = random_family(s, n1, n2, d);
          const auto theta = random_normal_vector(d, derive_seed(s, 50), 0.5);
          const auto dot = random_normal_vector(d, derive_seed(s, 51));
          const Density r1 = random_density(f.space().left(), derive_seed(s, 52));

          const auto psi_fn = [&](std::span<const double> th) { return psi(f, th); };
          worst = std::max(worst, max_abs_diff(grad_psi(f, theta), fd::fd_gradient(psi_fn, theta)));

          const auto along = [&](double t) {
            std::vector<double> th = theta;
            for (std::size_t j = 0; j < d; ++j) th[j] += t * dot[j];
            return density(f, th);
          };
          worst = std::max(worst, max_abs_diff(joint_velocity(f, theta, dot).values(),
                                               fd::fd_vector_curve([&](double t) {
                                                 return testing::log_of(along(t).flat().values());
                                               }, 0.0)));
          worst = std::max(worst, max_abs_diff(marginal_velocity(f, theta, dot).values(),
                                               fd::fd_vector_curve([&](double t) {
                                                 return testing::log_of(marginalize(along(t)).values());
                                               }, 0.0)));
          for (std::size_t x = 0; x < n1; ++x) {
            worst = std::max(worst, max_abs_diff(conditional_velocity(f, theta, dot, x).values(),
                                                 fd::fd_vector_curve([&](double t) {
                                                   return testing::log_of(
                                                       condition(along(t), x).values());
                                                 }, 0.0)));
          }
          for (FlowMode mode : {FlowMode::Left, FlowMode::Right}) {
            const auto obj = [&](std::span<const double> th) {
              return flow_objective(f, th, r1, mode);
            };
            const auto g = mode == FlowMode::Left ? kl_theta_gradient_left(f, theta, r1)
                                                  : kl_theta_gradient_right(f, theta, r1);
            worst = std::max(worst, max_abs_diff(g, fd::fd_gradient(obj, theta)));
          }
        }
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("natural_gradient_flow") {
  const ExpFamily c = fixture_c_prime();
  const Density u = testing::uniform_coin();

  SUBCASE("fixture C' collapses to theta = 0") {
    const FlowTrace trace = natural_gradient_flow(c, std::vector<double>{1.0}, u, FlowMode::Left, {});
    CHECK(trace.converged);
    CHECK(trace.records.size() <= 201);
    CHECK(std::abs(trace.records.back().theta[0]) < 1e-6);
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
      CHECK(trace.records[k].objective <= trace.records[k - 1].objective);
    }
  }
  SUBCASE("right mode reaches atanh of the target bias") {
    const Density target(testing::coin(), {1.5, 0.5});
    const FlowTrace trace = natural_gradient_flow(c, std::vector<double>{0.0}, target, FlowMode::Right, {});
    CHECK(trace.converged);
    CHECK(std::abs(trace.records.back().theta[0] - 0.549306144334055) < 1e-6);
  }
  SUBCASE("loose tolerance stops at the start") {
    FlowOptions opts;
    opts.tol = 10.0;
    const FlowTrace trace = natural_gradient_flow(c, std::vector<double>{1.0}, u, FlowMode::Left, opts);
    CHECK(trace.records.size() == 1);
    CHECK(trace.converged);
    CHECK(trace.records[0].step == 0.0);
  }
  SUBCASE("starting at the model margin is already stationary") {
    const std::vector<double> theta0{0.7};
    const Density r1 = marginalize(density(c, theta0));
    const FlowTrace trace = natural_gradient_flow(c, theta0, r1, FlowMode::Right, {});
    CHECK(trace.converged);
    CHECK(trace.records.size() == 1);
  }
  SUBCASE("objective never increases on random instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ExpFamily f = random_family(seed, 4, 3, 2);
      const Density r1 = random_density(f.space().left(), derive_seed(seed, 7));
      for (FlowMode mode : {FlowMode::Left, FlowMode::Right}) {
        FlowOptions opts;
        opts.iters = 50;
        const FlowTrace trace = natural_gradient_flow(f, std::vector<double>{0.3, -0.2}, r1, mode, opts);
        for (std::size_t k = 1; k < trace.records.size(); ++k) {
          CHECK(trace.records[k].objective <= trace.records[k - 1].objective);
        }
      }
    }
  }
  SUBCASE("invalid options") {
    FlowOptions opts;
    opts.step = 0.0;
    CHECK_THROWS_AS(natural_gradient_flow(c, std::vector<double>{1.0}, u, FlowMode::Left, opts), Error);
    CHECK_THROWS_AS(natural_gradient_flow(c, std::vector<double>{1.0, 2.0}, u, FlowMode::Left, {}),
                    Error);
  }
}
