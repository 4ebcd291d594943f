#pragma once

#include <cstdint>
#include <random>

#include "fdisac/types.hpp"

namespace fdisac {

/// splitmix64 mixing step; used for all seed derivation so that trial/stream
/// partitioning cannot change the draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent sub-seed for a named stream (symbol draw, noise,
/// per-trial chain, ...). Counter-based: identical (seed, stream) pairs give
/// identical engines regardless of call order or worker assignment.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(derive_seed(seed, stream));
}

/// Circularly symmetric complex normal with E|z|^2 = variance.
inline cplx draw_cn(std::mt19937_64& eng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(eng);
    const double im = n(eng);
    return {re, im};
}

// Stream tags for the top-level draw kinds.
namespace stream {
inline constexpr std::uint64_t kEmbeddedSymbols = 0x01;
inline constexpr std::uint64_t kCommSymbols = 0x02;
inline constexpr std::uint64_t kNoise = 0x03;
inline constexpr std::uint64_t kResidualSi = 0x04;
inline constexpr std::uint64_t kTrialBase = 0x10;
}  // namespace stream

/// Per-trial seed: worker partitioning must not affect any trial's draws.
inline std::uint64_t trial_seed(std::uint64_t scenario_seed, std::uint64_t trial_index) {
    return derive_seed(scenario_seed, stream::kTrialBase + splitmix64(trial_index));
}

}  // namespace fdisac
