#ifndef ENDURE_RNG_HPP
#define ENDURE_RNG_HPP

#include <cstdint>

namespace endure {

// splitmix64: tiny splittable generator with a platform-independent stream,
// so stored seeds reproduce outputs byte-identically everywhere.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound] without modulo bias (bound inclusive).
    std::uint64_t next_below(std::uint64_t bound_inclusive) {
        const std::uint64_t n = bound_inclusive + 1;
        if (n == 0) return next();  // full range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    // Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    SplitMix64 split() { return SplitMix64(next()); }
};

inline constexpr const char* kRngAlgorithm = "splitmix64";

// Halton low-discrepancy point, coordinate `dim` of point `index` (1-based
// indices give better early uniformity than starting at 0).
double halton(std::uint64_t index, unsigned dim);

}  // namespace endure

#endif
