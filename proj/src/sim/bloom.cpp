#include "endure/sim/bloom.hpp"

#include <cmath>

namespace endure::sim {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

BloomFilter::BloomFilter(std::size_t expected_entries, double bits_per_entry,
                         std::uint64_t seed)
    : seed_(seed) {
    if (expected_entries == 0 || bits_per_entry <= 0.0) return;
    bit_count_ = static_cast<std::size_t>(std::ceil(double(expected_entries) * bits_per_entry));
    if (bit_count_ == 0) return;
    hashes_ = std::max(1, int(std::lround(bits_per_entry * std::log(2.0))));
    words_.assign((bit_count_ + 63) / 64, 0);
}

void BloomFilter::insert(std::uint64_t key) {
    if (bit_count_ == 0) return;
    std::uint64_t h1 = mix(key ^ seed_);
    std::uint64_t h2 = mix(h1 + 0x9e3779b97f4a7c15ULL) | 1;
    for (int i = 0; i < hashes_; ++i) {
        std::uint64_t bit = (h1 + std::uint64_t(i) * h2) % bit_count_;
        words_[bit >> 6] |= 1ULL << (bit & 63);
    }
}

bool BloomFilter::maybe_contains(std::uint64_t key) const {
    if (bit_count_ == 0) return true;
    std::uint64_t h1 = mix(key ^ seed_);
    std::uint64_t h2 = mix(h1 + 0x9e3779b97f4a7c15ULL) | 1;
    for (int i = 0; i < hashes_; ++i) {
        std::uint64_t bit = (h1 + std::uint64_t(i) * h2) % bit_count_;
        if (!(words_[bit >> 6] & (1ULL << (bit & 63)))) return false;
    }
    return true;
}

}  // namespace endure::sim
