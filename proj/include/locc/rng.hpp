#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace locc {

// Deterministic 64-bit RNG: xoshiro256** seeded through splitmix64.
// All randomness in the project (ensembles, instruments, hidden strings,
// subset choices) flows through this generator so that runs are bit-exact
// reproducible across platforms for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
        has_gauss_ = false;
    }

    // Independent substream for trial `index` of a seeded batch.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t x = seed;
        std::uint64_t a = splitmix64(x);
        std::uint64_t mixed = a ^ (index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
        return Rng(splitmix64(mixed) ^ seed);
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

    // Uniform in [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection (unbiased).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool coin() { return (next_u64() >> 63) != 0; }

    // Standard normal via Box-Muller (deterministic, platform independent).
    double gaussian() {
        if (has_gauss_) {
            has_gauss_ = false;
            return gauss_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        gauss_ = r * std::sin(theta);
        has_gauss_ = true;
        return r * std::cos(theta);
    }

    // Random point on the probability simplex (normalized exponentials).
    std::vector<double> simplex(std::size_t k) {
        std::vector<double> p(k);
        double total = 0.0;
        for (auto& v : p) {
            double u;
            do {
                u = uniform();
            } while (u <= 0.0);
            v = -std::log(u);
            total += v;
        }
        for (auto& v : p) v /= total;
        return p;
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
    double gauss_ = 0.0;
    bool has_gauss_ = false;
};

}  // namespace locc
