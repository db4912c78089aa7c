#pragma once

#include <array>
#include <cstdint>

namespace mzcg {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Output is a pure function of (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Gaussian increment source indexed by (master_seed, stream_id, position).
//
// Every position yields a pair of independent standard normals. Scalar
// consumers take component 0 of the pair, so a 1D model driven by stream
// (s, k) sees exactly the x-component of the noise that the 2D model driven
// by the same stream sees.
struct NoiseStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t position = 0;

    std::array<double, 2> pair_at(std::uint64_t pos) const;
    double scalar_at(std::uint64_t pos) const { return pair_at(pos)[0]; }

    std::array<double, 2> next_pair() { return pair_at(position++); }
    double next_scalar() { return pair_at(position++)[0]; }
};

}  // namespace mzcg
