#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "msdict/bits.hpp"
#include "msdict/params.hpp"

namespace msdict {

// 2-bit code. 0b00 never appears inside a stream; it marks unused space.
enum class Symbol : std::uint8_t { kZero = 0b01, kOne = 0b10, kEoc = 0b11 };

// Counter length of multiplicity c: ceil(log2(c + 1)) binary digits.
inline std::uint32_t counter_weight(std::uint64_t c) {
  return static_cast<std::uint32_t>(std::bit_width(c));
}

// MSB-first digits of c followed by kEoc. Requires 1 <= c < heavy_threshold.
std::vector<Symbol> encode_counter(std::uint64_t c, std::uint64_t heavy_threshold);
// Inverse of encode_counter; throws std::invalid_argument on malformed input.
std::uint64_t decode_counter(const std::vector<Symbol>& symbols);

struct CounterLayout {
  std::uint32_t alloc_bits = 0;  // 2 (cap + n_B)
  std::uint32_t weight_cap = 0;  // ceil(6B)
  std::uint64_t heavy_threshold = 0;

  static CounterLayout from(const DerivedParams& p) {
    return {p.cd_alloc_bits, p.cd_weight_cap, p.T_heavy};
  }
  std::uint32_t symbol_capacity() const { return alloc_bits / 2; }
};

enum class CdStatus : std::uint8_t { kOk, kWouldExceedCap, kReachedHeavy, kReachedZero };

// The counters of one bin, concatenated in the ordinal order of the
// aligned pocket dictionary.
class CounterDict {
 public:
  explicit CounterDict(const CounterLayout& layout);
  CounterDict(const CounterLayout& layout, const Block& block);

  std::uint32_t size() const { return count_; }
  std::uint32_t total_weight() const { return used_ - count_; }
  std::uint32_t used_symbols() const { return used_; }

  std::uint64_t read(std::uint32_t i) const;
  CdStatus increment(std::uint32_t i);
  CdStatus decrement(std::uint32_t i);
  CdStatus insert_counter(std::uint32_t i, std::uint64_t c = 1);
  std::uint64_t remove_counter(std::uint32_t i);

  // Whether a counter of the given weight can be added under the cap.
  bool can_absorb(std::uint32_t weight) const;

  std::vector<std::uint64_t> values() const;
  bool well_formed() const;

  const Block& block() const { return block_; }
  const CounterLayout& layout() const { return *layout_; }

 private:
  struct Span {
    std::uint32_t start;  // first digit symbol
    std::uint32_t eoc;    // terminating symbol
  };
  Span locate(std::uint32_t i) const;
  std::size_t select_eoc(std::uint32_t k) const;
  void splice(std::uint32_t start, std::uint32_t old_len, std::uint64_t value);
  bool fits(std::int64_t extra_weight, std::int64_t extra_symbols) const;

  Symbol symbol(std::uint32_t j) const { return static_cast<Symbol>(block_.get(2 * j, 2)); }

  const CounterLayout* layout_;
  Block block_;
  std::uint32_t count_ = 0;
  std::uint32_t used_ = 0;
};

// m counter dictionaries packed back to back, alloc_bits each.
class CounterArena {
 public:
  CounterArena() = default;
  CounterArena(const CounterLayout& layout, std::uint64_t bins)
      : layout_(layout), bins_(bins), arena_(bins, layout.alloc_bits) {}

  CounterDict load(std::uint64_t bin, ProbeCounter* probes = nullptr) const {
    return CounterDict(layout_, arena_.load(bin, probes));
  }
  void store(std::uint64_t bin, const CounterDict& cd, ProbeCounter* probes = nullptr) {
    arena_.store(bin, cd.block(), probes);
  }

  const CounterLayout& layout() const { return layout_; }
  std::uint64_t allocated_bits() const { return bins_ * layout_.alloc_bits; }
  const BitArena& raw() const { return arena_; }
  BitArena& raw() { return arena_; }

 private:
  CounterLayout layout_;
  std::uint64_t bins_ = 0;
  BitArena arena_;
};

}  // namespace msdict
