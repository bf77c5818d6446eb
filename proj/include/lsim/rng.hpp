#pragma once
// Deterministic, platform-independent random streams.
//
// xoshiro256++ seeded through splitmix64 (Blackman & Vigna). The standard
// <random> distributions are implementation-defined, which would break the
// byte-identical rerun guarantee, so the few distributions needed here are
// spelled out explicitly.

#include <cmath>
#include <cstdint>

#include "lsim/common.hpp"

namespace lsim {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_spare_ = false;
        spare_ = 0.0;
    }

    // Independent child stream (for seeding parallel tasks deterministically).
    Rng child(std::uint64_t index) const {
        std::uint64_t mix = s_[0] ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return Rng(mix);
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        require(n > 0, "uniform_int: empty range");
        std::uint64_t mask = ~0ULL;
        if (n <= (1ULL << 63)) {
            std::uint64_t pow2 = 1;
            while (pow2 < n) pow2 <<= 1;
            mask = pow2 - 1;
        }
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Binomial(n, p) by explicit Bernoulli draws; n stays modest here (shots).
    std::uint64_t binomial(std::uint64_t n, double p) {
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < n; ++i)
            if (bernoulli(p)) ++k;
        return k;
    }

  private:
    std::uint64_t s_[4];
    bool has_spare_;
    double spare_;
};

}  // namespace lsim
