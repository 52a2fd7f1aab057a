// Counter-based random numbers: Philox4x32-10 keyed by (seed, step, stream).
// Stateless by construction, so parallel trajectory segments and seed
// ensembles draw reproducible, uncorrelated values.
#pragma once

#include <array>
#include <cstdint>

namespace spinmech {

// One Philox4x32-10 block: counter (c0..c3) and key (k0, k1) -> 4 words.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::array<std::uint32_t, 2> key);

struct NormalPair {
    double z0;
    double z1;
};

// Two independent standard normals from the block keyed by
// (seed; counter = {index, stream}). Box-Muller on the block's 128 bits.
NormalPair normal_pair(std::uint64_t seed, std::uint64_t index, std::uint32_t stream);

// Uniform double in [0, 1) from the same keyed block (word selected by lane 0/1).
double uniform01(std::uint64_t seed, std::uint64_t index, std::uint32_t stream);

} // namespace spinmech
