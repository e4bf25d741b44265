#ifndef ENDURE_SIM_BLOOM_HPP
#define ENDURE_SIM_BLOOM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace endure::sim {

// Blocked bit-array Bloom filter with double hashing. A filter sized at
// zero bits per entry degenerates to "always maybe" (no filtering).
class BloomFilter {
  public:
    BloomFilter() = default;
    BloomFilter(std::size_t expected_entries, double bits_per_entry, std::uint64_t seed);

    void insert(std::uint64_t key);
    bool maybe_contains(std::uint64_t key) const;

    std::size_t bit_count() const { return bit_count_; }
    int hash_count() const { return hashes_; }

  private:
    std::vector<std::uint64_t> words_;
    std::size_t bit_count_ = 0;
    int hashes_ = 0;
    std::uint64_t seed_ = 0;
};

}  // namespace endure::sim

#endif
