#pragma once

#include <cstdint>

namespace loctime {

// SplitMix64 finalizer: a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the random stream for one path. For a fixed master seed this is a
/// bijection of the path index, so distinct indices never share a stream.
constexpr std::uint64_t per_path_seed(std::uint64_t master_seed, std::uint64_t path_index) noexcept {
    return splitmix64(splitmix64(master_seed) + path_index * 0x9e3779b97f4a7c15ULL);
}

}  // namespace loctime
