#pragma once

#include <cmath>
#include <cstdint>

namespace qso::detail {

/// SplitMix64. Hand-rolled so that seeded results are identical on every
/// platform/standard library; std:: distributions make no such promise.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard exponential variate, always strictly positive.
    double exponential() { return -std::log(uniform01()); }

    bool coin() { return (next() & 1u) != 0; }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from (master, index); used to make
/// ensemble members reproducible regardless of evaluation order.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 g(master ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL));
    return g.next();
}

} // namespace qso::detail
