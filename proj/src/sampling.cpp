#include "statbundle/sampling.hpp"

#include <random>

namespace statbundle {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SampleSpace random_space(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.25, 2.0);
  std::vector<double> weights(n);
  for (double& w : weights) w = uniform(rng);
  return SampleSpace(std::move(weights));
}

std::vector<double> random_normal_vector(std::size_t n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> out(n);
  for (double& v : out) v = normal(rng);
  return out;
}

FiberVector random_fiber_vector(const Density& q, std::uint64_t seed, Polarity polarity) {
  return center(q, random_normal_vector(q.size(), seed), polarity);
}

JointDensity random_joint(const ProductSpace& space, std::uint64_t seed) {
  return JointDensity(space, random_density(space.joint(), seed));
}

}  // namespace statbundle
