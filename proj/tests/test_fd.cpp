#include <cmath>
#include <limits>

#include "doctest.h"
#include "statbundle/charts.hpp"
#include "statbundle/fd.hpp"
#include "statbundle/sampling.hpp"
#include "test_support.hpp"

using namespace statbundle;
using testing::max_abs_diff;

TEST_CASE("fd_scalar") {
  CHECK(fd::fd_scalar([](double) { return 3.0; }, 1.0) == 0.0);
  CHECK(std::abs(fd::fd_scalar([](double t) { return t * t; }, 3.0) - 6.0) <= 1e-9);
  const auto logcosh = [](double t) { return std::log(std::cosh(t)); };
  CHECK(std::abs(fd::fd_scalar(logcosh, 1.0) - std::tanh(1.0)) <= 1e-8);
  fd::FDConfig rich;
  rich.richardson = true;
  CHECK(std::abs(fd::fd_scalar(logcosh, 1.0, rich) - std::tanh(1.0)) <= 1e-9);
}

TEST_CASE("Richardson removes the leading truncation term") {
  const auto logcosh = [](double t) { return std::log(std::cosh(t)); };
  const double h = 1e-4;
  // f''' of log cosh is -2 tanh sech^2.
  const double third = -2.0 * std::tanh(1.0) / (std::cosh(1.0) * std::cosh(1.0));
  const double plain = fd::fd_scalar(logcosh, 1.0, {h, false});
  const double rich = fd::fd_scalar(logcosh, 1.0, {h, true});
  const double gap = std::abs(plain - rich);
  CHECK(gap <= h * h * std::abs(third));
  CHECK(gap == doctest::Approx(h * h * std::abs(third) / 6.0).epsilon(0.01));
  CHECK(std::abs(rich - std::tanh(1.0)) < std::abs(plain - std::tanh(1.0)));
}

TEST_CASE("fd_gradient") {
  const auto linear = [](std::span<const double> x) { return 2.0 * x[0] - 3.0 * x[1] + 0.5 * x[2]; };
  const std::vector<double> at{0.1, -4.0, 7.0};
  CHECK(max_abs_diff(fd::fd_gradient(linear, at), std::vector<double>{2.0, -3.0, 0.5}) <= 1e-9);

  // log E exp(theta T) over the uniform 2x2 table with T = (1, -1, -1, 1) is log cosh.
  const auto psi_c = [](std::span<const double> th) {
    return std::log(0.5 * std::exp(th[0]) + 0.5 * std::exp(-th[0]));
  };
  CHECK(std::abs(fd::fd_gradient(psi_c, std::vector<double>{1.0})[0] - 0.761594155955765) <= 1e-9);
}

TEST_CASE("fd_vector_curve along a mixture line") {
  const Density p = random_density(random_space(4, 3), 5);
  const FiberVector w = 0.3 * random_fiber_vector(p, 6);
  const auto curve = [&](double t) {
    const Density q = mix_chart_inv(p, t * w);
    return std::vector<double>(q.values().begin(), q.values().end());
  };
  std::vector<double> expected(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) expected[x] = w[x] * p[x];
  CHECK(max_abs_diff(fd::fd_vector_curve(curve, 0.0), expected) <= 1e-9);
}

TEST_CASE("configuration and non-finite probes") {
  for (double h : {0.0, -1e-5, 1e-2, 1.0, std::numeric_limits<double>::quiet_NaN()}) {
    try {
      fd::fd_scalar([](double t) { return t; }, 0.0, {h, false});
      FAIL("bad step accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }
  try {
    fd::fd_scalar([](double t) { return std::log(t); }, 0.0);
    FAIL("NaN probe accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
  CHECK_THROWS_AS(fd::fd_vector_curve([](double t) { return std::vector<double>{std::sqrt(t)}; }, 0.0),
                  Error);
}
