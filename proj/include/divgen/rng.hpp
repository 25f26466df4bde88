#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace divgen {

inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Substream seed from an ordered tuple of components (seed, generation, role, ...).
inline uint64_t derive_seed(std::initializer_list<uint64_t> parts) {
    uint64_t h = 0x6a09e667f3bcc908ULL;
    for (uint64_t p : parts) h = mix64(h ^ mix64(p));
    return h;
}

// Stream roles used by the engine when deriving substreams.
inline constexpr uint64_t kStreamInit = 1;
inline constexpr uint64_t kStreamVariation = 2;
inline constexpr uint64_t kStreamFreshOffspring = 3;
inline constexpr uint64_t kStreamModelGen = 4;
inline constexpr uint64_t kStreamRunSeed = 5;

// Draw primitives are virtual so tests can script exact decisions.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual uint64_t next_u64() = 0;

    virtual double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    virtual bool coin(double p) { return uniform01() < p; }

    // Unbiased integer in [0, n) via Lemire's multiply-shift rejection.
    virtual size_t uniform_index(size_t n) {
        uint64_t range = static_cast<uint64_t>(n);
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * range;
        uint64_t lo = static_cast<uint64_t>(m);
        if (lo < range) {
            uint64_t threshold = (0 - range) % range;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * range;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<size_t>(m >> 64);
    }

    virtual int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(uniform_index(static_cast<size_t>(hi - lo) + 1));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }
};

class SplitMix64 final : public RandomSource {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() override {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    uint64_t state_;
};

}  // namespace divgen
