#pragma once

#include <cstdint>
#include <random>

namespace flrdt {

// Counter-based stream splitting: every (seed, stream, index) triple maps to
// its own engine, so results never depend on evaluation order.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return std::mt19937_64(stream_seed(seed, stream, index));
}

} // namespace flrdt
