#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bvf::rng {

using Engine = std::mt19937_64;

// Mixes a root seed with a path of indices (replication, bootstrap resample, ...)
// into an independent 64-bit seed. Streams derived from different paths do not
// depend on evaluation order, which keeps parallel runs reproducible.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// Engine seeded through std::seed_seq from a 64-bit seed.
Engine make_engine(std::uint64_t seed);

// Uniform on the open interval (0, 1): (k + 0.5) / 2^53 for a 53-bit integer k.
inline double uniform_open(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1p-53;
}

}  // namespace bvf::rng
