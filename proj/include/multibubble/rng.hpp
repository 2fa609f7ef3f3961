// Counter-based random numbers (Philox4x32-10) with explicit stream ids.
//
// Every sample is a pure function of (seed, stream, index), so estimates are
// bit-reproducible across runs and platforms, substreams never overlap, and
// perturbed evaluations can share draws (common random numbers) by reusing
// the same (seed, stream) and indexing scheme.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace multibubble {

namespace detail {

// One Philox4x32-10 block: key = seed, counter = (index lo/hi, stream lo/hi).
inline std::array<std::uint32_t, 4> philox_block(std::uint64_t seed,
                                                 std::uint64_t stream,
                                                 std::uint64_t index) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t c0 = static_cast<std::uint32_t>(index);
    std::uint32_t c1 = static_cast<std::uint32_t>(index >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
        std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        std::uint32_t n0 = hi1 ^ c1 ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c3 ^ k1;
        std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += W0; k1 += W1;
    }
    return {c0, c1, c2, c3};
}

// Map two 32-bit words to a uniform double in the open interval (0,1).
inline double as_unit_double(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

// SplitMix64 finalizer, used to derive well-separated substream ids.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

inline std::uint64_t substream(std::uint64_t stream, std::uint64_t tag) {
    return detail::mix64(stream * 0x632BE59BD9B4E019ull + tag);
}

// Random-access stream of standard normals. normal(i) depends only on
// (seed, stream, i); pairs (2k, 2k+1) come from one Philox block via
// Box-Muller, so a fixed index always yields the same variate.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    double normal(std::uint64_t i) const {
        auto b = detail::philox_block(seed_, stream_, i >> 1);
        double u1 = detail::as_unit_double(b[0], b[1]);
        double u2 = detail::as_unit_double(b[2], b[3]);
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        return (i & 1) ? r * std::sin(a) : r * std::cos(a);
    }

    double uniform(std::uint64_t i) const {
        auto b = detail::philox_block(seed_, stream_ ^ 0x5DEECE66Dull, i);
        return detail::as_unit_double(b[0], b[1]);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace multibubble
