#include "kcbs/rng.hpp"

namespace kcbs {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t product = std::uint64_t(a) * std::uint64_t(b);
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t RngStream::next_u64()
{
    const std::uint64_t word = counter_++;
    const std::uint64_t block = word >> 1;
    if ((word & 1) == 0) {
        block_ = philox4x32_10(
            {static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32),
             static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    }
    const std::size_t half = (word & 1) * 2;
    return (std::uint64_t(block_[half + 1]) << 32) | block_[half];
}

double RngStream::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t RngStream::uniform_index(std::uint32_t n)
{
    // Lemire's multiply-shift with rejection; unbiased for every n.
    const std::uint64_t range = n;
    while (true) {
        const std::uint64_t x = next_u64() >> 32;
        const std::uint64_t m = x * range;
        const std::uint64_t low = m & 0xFFFFFFFFu;
        if (low >= (0x100000000ull - range) % range) {
            return static_cast<std::uint32_t>(m >> 32);
        }
    }
}

}  // namespace kcbs
