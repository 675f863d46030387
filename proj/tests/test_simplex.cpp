#include "doctest.h"
#include "statbundle/simplex.hpp"
#include "test_support.hpp"

using namespace statbundle;
using testing::coin;

TEST_CASE("make_space validates weights") {
  CHECK(make_space({0.5, 0.5}).size() == 2);
  CHECK(make_space({1, 1, 1}).total_mass() == doctest::Approx(3.0));
  const SampleSpace s = make_space({0.2, 0.3, 0.5});
  CHECK(s.weight(2) == 0.5);

  auto kind_of = [](std::vector<double> w) {
    try {
      make_space(std::move(w));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Config;
  };
  CHECK(kind_of({0.2, 0.0}) == ErrorKind::InvalidSpace);
  CHECK(kind_of({0.2, -1.0}) == ErrorKind::InvalidSpace);
  CHECK(kind_of({1.0}) == ErrorKind::InvalidSpace);
}

TEST_CASE("weights are stored verbatim") {
  const SampleSpace s = make_space({2.0, 3.0});
  CHECK(s.weight(0) == 2.0);
  CHECK(s.weight(1) == 3.0);
}

TEST_CASE("make_density") {
  const Density u = make_density(coin(), {1.0, 1.0});
  CHECK(u[0] == 1.0);
  const Density q = make_density(coin(), {1.2, 0.8});
  CHECK(q[0] == 1.2);

  try {
    make_density(coin(), {1.2, 0.0});
    FAIL("boundary density accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Boundary);
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
  CHECK_THROWS_AS(make_density(coin(), {1.2, 1e-301}), Error);
  CHECK_THROWS_AS(make_density(coin(), {1.0, 1.0, 1.0}), Error);

  SUBCASE("small drift is renormalized") {
    const Density d = make_density(coin(), {1.0 + 1e-9, 1.0});
    CHECK(std::abs(d.mass(0) + d.mass(1) - 1.0) <= 1e-12);
    CHECK(d[0] > d[1]);
  }
  SUBCASE("drift at the renormalization limit is an error") {
    try {
      make_density(coin(), {1.2, 0.81});
      FAIL("unnormalized density accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Normalization);
    }
  }
}

TEST_CASE("expect") {
  const Density u = Density::uniform(coin());
  const std::vector<double> pm{1.0, -1.0};
  CHECK(expect(u, pm) == 0.0);
  const Density q(coin(), {1.2, 0.8});
  const std::vector<double> first{1.0, 0.0};
  CHECK(expect(q, first) == doctest::Approx(0.6).epsilon(1e-15));
  const std::vector<double> c(2, 3.25);
  CHECK(expect(random_density(make_space({0.3, 1.0, 2.0}), 5), std::vector<double>(3, 3.25)) ==
        doctest::Approx(3.25).epsilon(1e-14));
  CHECK(expect(q, c) == doctest::Approx(3.25));
  CHECK_THROWS_AS(expect(q, std::vector<double>{1.0}), Error);
}

TEST_CASE("pairing") {
  const Density u = Density::uniform(coin());
  const FiberVector zero = FiberVector::zero(u);
  CHECK(pairing(u, zero, zero) == 0.0);
  const FiberVector v(u, {1.0, -1.0});
  CHECK(pairing(u, v, v) == doctest::Approx(1.0).epsilon(1e-15));

  const Density q(coin(), {1.2, 0.8});
  const FiberVector elsewhere = center(q, std::vector<double>{1.0, 0.0});
  CHECK_THROWS_AS(pairing(u, v, elsewhere), Error);
}

TEST_CASE("pairing is symmetric and bilinear") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SampleSpace s = random_space(2 + seed % 9, seed);
    const Density q = random_density(s, seed + 1000);
    const FiberVector v = random_fiber_vector(q, derive_seed(seed, 1));
    const FiberVector u = random_fiber_vector(q, derive_seed(seed, 2));
    const FiberVector w = random_fiber_vector(q, derive_seed(seed, 3));
    const double a = 0.7 + 0.01 * static_cast<double>(seed);
    const double b = -1.3;
    CHECK(pairing(q, v, w) == pairing(q, w, v));
    const double lhs = pairing(q, a * v + b * u, w);
    CHECK(std::abs(lhs - a * pairing(q, v, w) - b * pairing(q, u, w)) <= 1e-10);
  }
}

TEST_CASE("center") {
  const Density u = Density::uniform(coin());
  const FiberVector c = center(u, std::vector<double>{1.0, 0.0});
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(-0.5));
  const FiberVector k = center(u, std::vector<double>{4.0, 4.0});
  CHECK(k[0] == 0.0);
  CHECK(k[1] == 0.0);
  CHECK(center(u, std::vector<double>{0.3, -0.3})[0] == 0.3);
  CHECK(center(u, std::vector<double>{1.0, 2.0}, Polarity::Mixture).polarity() == Polarity::Mixture);
  CHECK_THROWS_AS(center(u, std::vector<double>{1.0}), Error);
}

TEST_CASE("center is idempotent and lands in the fiber") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SampleSpace s = random_space(2 + seed % 16, seed);
    const Density q = random_density(s, seed + 7);
    const auto f = random_normal_vector(s.size(), seed + 11, 3.0);
    const FiberVector once = center(q, f);
    const FiberVector twice = center(q, once.values());
    CHECK(testing::max_abs_diff(once.values(), twice.values()) <= 1e-15);
    CHECK(std::abs(expect(q, once.values())) <= 1e-12);
  }
}

TEST_CASE("fiber vectors reject nonzero mean") {
  const Density u = Density::uniform(coin());
  try {
    FiberVector(u, {1.0, 0.0});
    FAIL("off-fiber vector accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInFiber);
  }
  const Density q(coin(), {1.2, 0.8});
  CHECK_THROWS_AS(FiberVector(u, {1.0, -1.0}) + center(q, std::vector<double>{1.0, 0.0}), Error);
}

TEST_CASE("random_density") {
  const SampleSpace s = make_space({0.2, 0.3, 0.5, 1.5});
  CHECK(random_density(s, 9) == random_density(s, 9));
  const Density a = random_density(s, 1);
  const Density b = random_density(s, 2);
  CHECK(testing::max_abs_diff(a.values(), b.values()) > 0.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Density q = random_density(random_space(2 + seed % 17, seed), seed);
    double mass = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) {
      CHECK(q[x] > 0.0);
      mass += q.mass(x);
    }
    CHECK(std::abs(mass - 1.0) <= 1e-12);
  }
}

TEST_CASE("product space and joint density") {
  const SampleSpace left = make_space({0.2, 0.8});
  const SampleSpace right = make_space({1.0, 2.0, 0.5});
  const ProductSpace space(left, right);
  CHECK(space.joint().size() == 6);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      CHECK(space.joint().weight(space.index(x, y)) == left.weight(x) * right.weight(y));
    }
  }
  const Density p1 = random_density(left, 3);
  const Density p2 = random_density(right, 4);
  const JointDensity p = product(p1, p2);
  CHECK(p(1, 2) == p1[1] * p2[2]);
  CHECK(p.space() == space);

  const JointDensity b = testing::fixture_b();
  CHECK(b(0, 1) == 0.4);
  CHECK_THROWS_AS(JointDensity(testing::coins(), std::vector<std::vector<double>>{{1.6, 0.4}}),
                  Error);
  CHECK_THROWS_AS(JointDensity(testing::coins(), random_density(left, 1)), Error);
}
