#include "mzcg/noise.hpp"

#include <cmath>
#include <numbers>

namespace mzcg {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

// Uniform on the open interval (0, 1) from 53 random bits.
inline double open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kMul0, ctr[0], lo0, hi0);
        mulhilo(kMul1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::array<double, 2> NoiseStream::pair_at(std::uint64_t pos) const {
    const auto r = philox4x32(
        {static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos >> 32),
         static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)},
        {static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)});
    // Box-Muller
    const double u1 = open_unit(r[0], r[1]);
    const double u2 = open_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace mzcg
