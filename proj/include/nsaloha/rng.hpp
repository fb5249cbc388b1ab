#pragma once

#include <cstdint>
#include <random>

namespace nsaloha {

// splitmix64; used only to derive well-separated per-stream seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

using RngEngine = std::mt19937_64;

/// One independent stream per replication index, so results do not depend on
/// how replications are scheduled across threads.
inline RngEngine replication_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed);
    std::uint64_t base = mix.next();
    SplitMix64 per_stream(base ^ (0xD1342543DE82EF95ULL * (index + 1)));
    return RngEngine(per_stream.next());
}

}  // namespace nsaloha
