#pragma once

#include <array>
#include <cstdint>

namespace kcbs {

/// Philox4x32-10 block function (Salmon, Moraes, Dror, Shaw; SC'11).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/**
 * Counter-based random stream.
 *
 * The key is the 64-bit seed. The 128-bit Philox counter is
 * (stream_id low, stream_id high, block low, block high), so every
 * (seed, stream_id) pair names an independent stream that can be
 * reconstructed anywhere without shared state. Each Philox block yields two
 * 64-bit words; uniform() consumes one word and keeps its top 53 bits.
 */
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform integer in [0, n). n must be positive.
    std::uint32_t uniform_index(std::uint32_t n);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    /// Number of 64-bit words consumed so far.
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
};

}  // namespace kcbs
