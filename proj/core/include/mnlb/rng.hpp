#pragma once

#include <cstdint>
#include <random>

namespace mnlb {

/// Random stream owned by the caller. All sampling in the library draws from one of these.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine output.
double uniform01(Rng& rng);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Purpose tags keep streams for different consumers of the same (draw, rep) disjoint.
enum class StreamTag : std::uint64_t {
  prior = 1,
  choice = 2,
  policy = 3,
};

/// Derives an independent seed from the master seed and a (draw, replication, tag) address.
/// The result depends only on its arguments, never on execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t draw, std::uint64_t rep,
                          StreamTag tag) noexcept;

}  // namespace mnlb
