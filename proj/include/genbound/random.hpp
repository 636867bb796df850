#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

namespace genbound {

// Boost engines and distributions produce the same stream on every
// platform, which the determinism contract depends on.
using Rng = boost::random::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Sub-stream seed for work item `index` of task `task`:
//   mix64(seed ^ mix64(fnv1a64(task) ^ mix64(index)))
std::uint64_t derive_seed(std::uint64_t seed, std::string_view task, std::uint64_t index);

/// Dirichlet(1, ..., 1) sample of the given length.
std::vector<double> sample_flat_dirichlet(Rng& rng, std::size_t size);

/// Uniform integer in [lo, hi].
std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);

}  // namespace genbound
