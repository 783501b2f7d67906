// rng.hpp: xoshiro256** seeded through SplitMix64, with keyed substreams
//
// Gaussian deviates come from the Box-Muller transform, caching the second value.
// Both the generator and the transform are fixed so seeded runs reproduce across builds.

#pragma once

#include <array>
#include <cstdint>

namespace qthermo {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();

private:
    std::uint64_t state_;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent stream for work item `index` of a run seeded with `master`.
    static Rng substream(std::uint64_t master, std::uint64_t index);
    static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

    std::uint64_t next();
    double uniform();  // [0, 1)
    double normal();   // N(0, 1)

private:
    std::array<std::uint64_t, 4> s_{};
    double cached_normal_{};
    bool has_cached_{false};
};

}  // namespace qthermo
