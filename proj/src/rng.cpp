#include "endure/rng.hpp"

#include "endure/errors.hpp"

namespace endure {

namespace {
constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
}

double halton(std::uint64_t index, unsigned dim) {
    if (dim >= sizeof(kPrimes) / sizeof(kPrimes[0]))
        throw ConfigError("halton dimension too large");
    const unsigned base = kPrimes[dim];
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

}  // namespace endure
