#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace scp {

// splitmix64 step; also used to expand keys into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Combines a parent key with a child id into a new 64-bit key.
inline std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id) {
    std::uint64_t s = parent ^ (0x9e3779b97f4a7c15ULL * (id + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

inline std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id0,
                                std::uint64_t id1) {
    return derive_key(derive_key(parent, id0), id1);
}

inline std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id0,
                                std::uint64_t id1, std::uint64_t id2) {
    return derive_key(derive_key(parent, id0, id1), id2);
}

// Counter-free xoshiro256++ stream addressed by a 64-bit key. Substreams are
// derived from the key, not from generator state, so consumption order in one
// stream never perturbs another. All distributions are implemented here so
// output is bit-identical across platforms and standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : key_(key) {
        std::uint64_t s = key;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t key() const { return key_; }

    RngStream derive(std::uint64_t id) const {
        return RngStream(derive_key(key_, id));
    }
    RngStream derive(std::uint64_t id0, std::uint64_t id1) const {
        return RngStream(derive_key(key_, id0, id1));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n must be positive. Rejection keeps it unbiased.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Box-Muller; two uniforms per draw, no cached spare.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t key_;
    std::uint64_t state_[4];
};

}  // namespace scp
