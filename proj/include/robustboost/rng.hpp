// rng.hpp
//
// Deterministic random number generation. We use xoshiro256** seeded through
// splitmix64 instead of <random> engines + distributions, because distribution
// output is implementation-defined and every experiment must replay
// byte-identically across toolchains.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "errors.hpp"

namespace robustboost {

inline constexpr const char* kRngName = "xoshiro256**";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, n) by rejection, unbiased.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw ContractError("uniform_below: empty range");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool coin() { return (next_u64() >> 63) != 0; }

    // Draw an index from non-negative weights (need not be normalized).
    std::size_t sample_weighted(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ContractError("sample_weighted: negative weight");
            total += w;
        }
        if (total <= 0.0) throw ContractError("sample_weighted: zero total mass");
        double u = uniform_double() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.size() - 1;
    }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = uniform_below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
};

// Stable seed derivation for per-trial / per-call child generators.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t sm = master;
    (void)splitmix64(sm);
    sm ^= 0xD1B54A32D192ED03ULL * (index + 1);
    return splitmix64(sm);
}

}  // namespace robustboost
