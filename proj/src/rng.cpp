#include "stable_embed/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stable_embed::rng {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

Block philox4x32_10(std::array<std::uint32_t, 2> key, std::array<std::uint32_t, 4> counter) {
    round_once(counter, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
        round_once(counter, key);
    }
    return Block{counter};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer over seed xor a salted odd constant
    std::uint64_t z = seed ^ (salt * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

std::uint64_t Stream::bits64(std::uint64_t i) const {
    const Block b = philox4x32_10(
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)},
        {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)});
    return b.lo64();
}

double Stream::uniform01(std::uint64_t i) const {
    return static_cast<double>(bits64(i) >> 11) * 0x1.0p-53;
}

double Stream::gaussian(std::uint64_t i) const {
    const Block b = philox4x32_10(
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)},
        {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)});
    const double u1 = static_cast<double>(b.lo64() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(b.hi64() >> 11) * 0x1.0p-53;
    // log argument lies in (0, 1]; u1 == 0 gives radius 0, which is fine
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

double Stream::sign(std::uint64_t i) const {
    return (bits64(i) & 1u) ? 1.0 : -1.0;
}

std::uint64_t Stream::below(std::uint64_t i, std::uint64_t bound) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits64(i)) * bound) >> 64);
}

std::vector<std::int64_t> sample_without_replacement(std::int64_t k, std::int64_t n,
                                                     const Stream& stream) {
    if (k < 0 || n < 0 || k > n) {
        throw std::invalid_argument("sample_without_replacement: need 0 <= k <= n, got k=" +
                                    std::to_string(k) + " n=" + std::to_string(n));
    }
    std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), std::int64_t{0});
    for (std::int64_t i = 0; i < k; ++i) {
        const std::uint64_t j =
            static_cast<std::uint64_t>(i) +
            stream.below(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace stable_embed::rng
