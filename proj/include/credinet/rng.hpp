#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace credinet {

/// Deterministic random source. Wraps mt19937_64 but does all variate
/// generation itself, so identical seeds give identical streams on every
/// platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), n > 0. Rejection-free modulo bias is
    /// negligible for n << 2^64 but we reject anyway to stay exact.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Exponential waiting time with the given rate.
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    int poisson(double mean) {
        // Inversion for small means, normal-rejection-free cumulative walk
        // otherwise; means used here are modest (<= a few hundred).
        double L = std::exp(-mean);
        if (L > 0) {
            int k = 0;
            double p = 1.0;
            do {
                ++k;
                p *= uniform();
            } while (p > L);
            return k - 1;
        }
        // Very large mean: sum of two halves.
        return poisson(mean / 2) + poisson(mean / 2);
    }

  private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent per-point seeds.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base ^ (index + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace credinet
