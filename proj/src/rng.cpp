#include "spinmech/rng.hpp"

#include <cmath>

#include "spinmech/constants.hpp"

namespace spinmech {

namespace {

constexpr std::uint32_t mult_a = 0xD2511F53u;
constexpr std::uint32_t mult_b = 0xCD9E8D57u;
constexpr std::uint32_t weyl_a = 0x9E3779B9u;
constexpr std::uint32_t weyl_b = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k)
{
    const std::uint64_t p0 = static_cast<std::uint64_t>(mult_a) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(mult_b) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t index,
                                          std::uint32_t stream)
{
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0u};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    return philox4x32(counter, key);
}

// 53-bit mantissa uniform in (0, 1]: safe under log()
inline double uniform_open(std::uint64_t bits)
{
    return ((bits >> 11) + 1.0) * 0x1.0p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::array<std::uint32_t, 2> key)
{
    std::array<std::uint32_t, 4> c = counter;
    for (int i = 0; i < 10; ++i) {
        round_once(c, key);
        key[0] += weyl_a;
        key[1] += weyl_b;
    }
    return c;
}

NormalPair normal_pair(std::uint64_t seed, std::uint64_t index, std::uint32_t stream)
{
    const auto b = block(seed, index, stream);
    const std::uint64_t w0 = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    const std::uint64_t w1 = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    const double u1 = uniform_open(w0);
    const double u2 = (w1 >> 11) * 0x1.0p-53;  // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

double uniform01(std::uint64_t seed, std::uint64_t index, std::uint32_t stream)
{
    const auto b = block(seed, index, stream);
    const std::uint64_t w = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    return (w >> 11) * 0x1.0p-53;
}

} // namespace spinmech
