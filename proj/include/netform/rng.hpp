#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace netform {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

// xoshiro256++ with an explicit uniform/normal layer. The standard library
// distributions are implementation-defined, so every stochastic result in
// this project flows through this class to keep outputs byte-reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = detail::splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1]; safe under log()
    double uniform_oc() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Marsaglia polar method; caches the paired deviate.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        has_cached_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

  private:
    std::array<std::uint64_t, 4> state_{};
    double cached_ = 0;
    bool has_cached_ = false;
};

// Stream-splitting rule: every stochastic job draws from an independent
// stream derived from (master seed, context tag, job index). Serial and
// parallel executions therefore see identical streams per job.
inline Rng derive_stream(std::uint64_t master_seed, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t x = master_seed;
    std::uint64_t a = detail::splitmix64(x);
    x ^= detail::fnv1a64(tag);
    std::uint64_t b = detail::splitmix64(x);
    x += 0x632BE59BD9B4E019ull * (index + 1);
    std::uint64_t c = detail::splitmix64(x);
    return Rng(a ^ detail::rotl(b, 17) ^ detail::rotl(c, 41));
}

}  // namespace netform
