#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace speechjudge {

using Rng = std::mt19937_64;

/// Seed for an independent stream named `stream` under `global_seed`.
/// Used to give every record its own generator so that results do not depend
/// on processing order.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stream);

inline Rng make_rng(std::uint64_t global_seed, std::string_view stream) {
  return Rng(derive_seed(global_seed, stream));
}

// The helpers below avoid std:: distributions, whose output is not specified
// across standard library implementations.

/// Uniform in [0, 1) with 53 bits of resolution.
double unit_uniform(Rng& rng);

/// Uniform in [0, n). Requires n > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

inline bool fair_coin(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace speechjudge
