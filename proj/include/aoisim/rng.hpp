#pragma once

#include <cstdint>

namespace aoisim {

// splitmix64 step (Vigna). Used to expand and mix seed material so that
// nearby master seeds still yield well-separated engine states.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministically derives the seed of substream `index` from a master seed.
// Distinct indices give independent, reproducible streams.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t state = master_seed ^ (0xA0761D6478BD642FULL * (index + 1));
    std::uint64_t mixed = splitmix64_next(state);
    return splitmix64_next(state) ^ mixed;
}

}  // namespace aoisim
