#pragma once

// Seeded generators for random test instances. Everything here is a pure
// function of its seed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "statbundle/simplex.hpp"

namespace statbundle {

/// Mixes a base seed with a stream index (splitmix64), so per-trial seeds do
/// not depend on execution order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// n reference weights drawn uniformly from [0.25, 2).
SampleSpace random_space(std::size_t n, std::uint64_t seed);

/// Standard-normal values centered under q.
FiberVector random_fiber_vector(const Density& q, std::uint64_t seed,
                                Polarity polarity = Polarity::Exponential);

std::vector<double> random_normal_vector(std::size_t n, std::uint64_t seed, double scale = 1.0);

JointDensity random_joint(const ProductSpace& space, std::uint64_t seed);

}  // namespace statbundle
