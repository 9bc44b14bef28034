#pragma once

#include <cmath>
#include <cstdint>

namespace synthlab {

// Counter-based RNG: every draw is a pure function of (seed, stream, counter),
// so Monte Carlo loops can be split across threads in any order and still
// reproduce the single-threaded result exactly.
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t key = mix64(seed + kGolden * (stream + 1));
    return mix64(key + kGolden * (counter + 1));
}

// Uniform in [0, 1), 53-bit mantissa.
inline double u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

} // namespace rng
} // namespace synthlab
