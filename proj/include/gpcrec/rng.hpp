#ifndef GPCREC_RNG_HPP
#define GPCREC_RNG_HPP

#include <cstdint>
#include <cmath>

namespace gpcrec {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ stream. Substreams are derived from (seed, index) so that
/// draw i is reproducible bit-for-bit no matter how work is split across
/// threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t substream = 0) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (substream + 1));
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (two uniforms per call, no caching so
    /// the draw count per call is fixed).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        // avoid log(0)
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace gpcrec

#endif
