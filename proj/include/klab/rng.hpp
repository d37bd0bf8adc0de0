#pragma once

#include <cstdint>
#include <random>

namespace klab {

// SplitMix64 step (Steele/Lea/Flood); used only to spread seeds into
// independent substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Seedable, splittable generator: mt19937_64 core (bit-reproducible across
// platforms, the algorithm is pinned by the standard) with SplitMix64-derived
// substream seeds. Uniform doubles take the top 53 bits so results do not
// depend on library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed;
        splitmix64(s);
        s ^= 0x1F123BB5159A55E5ull * (stream_id + 1);
        std::uint64_t derived = splitmix64(s);
        return Rng(derived);
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    static constexpr const char* name() { return "mt19937_64+splitmix64"; }

private:
    std::mt19937_64 gen_;
};

} // namespace klab
