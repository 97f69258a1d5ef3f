#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace stable_embed::rng {

// Counter-based generator (Philox4x32-10). Each 128-bit output block is a
// pure function of (key, counter), so draw i of a stream can be produced
// without generating draws 0..i-1. That property is what makes descriptor
// reconstruction exact and parallel sampling order-independent.
struct Block {
    std::array<std::uint32_t, 4> v;

    std::uint64_t lo64() const {
        return static_cast<std::uint64_t>(v[0]) | (static_cast<std::uint64_t>(v[1]) << 32);
    }
    std::uint64_t hi64() const {
        return static_cast<std::uint64_t>(v[2]) | (static_cast<std::uint64_t>(v[3]) << 32);
    }
};

Block philox4x32_10(std::array<std::uint32_t, 2> key, std::array<std::uint32_t, 4> counter);

// Stateless mixer used to derive auxiliary seeds (e.g. the sign diagonal
// paired with a measurement operator) from a user-facing seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// One named substream of a 64-bit seed. Streams with different ids never
// share counters, so independent purposes can draw from the same seed.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t bits64(std::uint64_t i) const;
    double uniform01(std::uint64_t i) const;  // [0, 1), 53-bit mantissa
    double gaussian(std::uint64_t i) const;   // N(0, 1), Box-Muller
    double sign(std::uint64_t i) const;       // exactly +1.0 or -1.0
    // integer in [0, bound) via 128-bit fixed-point multiply; bound >= 1
    std::uint64_t below(std::uint64_t i, std::uint64_t bound) const;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

// Fixed stream ids, one per purpose, so draws never collide across uses of
// the same seed.
namespace streams {
inline constexpr std::uint64_t entries = 0;         // matrix / probe entries
inline constexpr std::uint64_t selection = 1;       // row selection shuffles
inline constexpr std::uint64_t signs = 2;           // sign diagonals
inline constexpr std::uint64_t chords = 3;          // manifold pair sampling
inline constexpr std::uint64_t sparse_values = 4;   // sparse test vector values
inline constexpr std::uint64_t sparse_support = 5;  // sparse test vector supports
inline constexpr std::uint64_t power_iter = 6;      // norm estimation start vectors
}  // namespace streams

// First k entries of a random permutation of {0..n-1}, returned sorted.
std::vector<std::int64_t> sample_without_replacement(std::int64_t k, std::int64_t n,
                                                     const Stream& stream);

}  // namespace stable_embed::rng
