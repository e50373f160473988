#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "msdict/bits.hpp"
#include "msdict/params.hpp"

namespace msdict {

// Geometry of one pocket dictionary. Keys are remainders in
// [2^(quotient_bits + remainder_width)]; the high quotient_bits select a
// bucket, the low remainder_width bits are stored in the body.
struct PocketLayout {
  std::uint32_t quotient_bits = 0;
  std::uint32_t remainder_width = 0;
  std::uint32_t capacity = 0;  // n_B

  static PocketLayout from(const DerivedParams& p) {
    return {p.quotient_bits, p.remainder_width, p.n_B};
  }

  std::uint32_t buckets() const { return 1u << quotient_bits; }
  std::uint32_t header_bits() const { return buckets() + capacity; }
  std::uint32_t total_bits() const { return header_bits() + capacity * remainder_width; }
  std::uint32_t block_words() const { return (total_bits() + 63) / 64; }
  std::uint64_t key_space() const { return std::uint64_t{1} << (quotient_bits + remainder_width); }
};

enum class PdStatus : std::uint8_t { kOk, kFull, kDuplicate, kNotFound };

struct PdResult {
  PdStatus status = PdStatus::kOk;
  std::uint32_t ordinal = 0;
};

// Elias-Fano set dictionary for one bin: a unary header (per bucket, one
// 1 per stored key then a terminating 0) followed by the packed low bits
// of each key in (quotient, remainder) order. The layout is canonical:
// equal sets have equal blocks.
class PocketDict {
 public:
  explicit PocketDict(const PocketLayout& layout);
  PocketDict(const PocketLayout& layout, const Block& block);

  // Ordinal of key among the stored keys, if present.
  std::optional<std::uint32_t> query(std::uint64_t key) const;
  PdResult insert(std::uint64_t key);
  PdResult erase(std::uint64_t key);

  bool full() const { return count_ == layout_->capacity; }
  bool empty() const { return count_ == 0; }
  std::uint32_t size() const { return count_; }

  // Keys in ordinal order.
  std::vector<std::uint64_t> keys() const;
  std::uint64_t key_at(std::uint32_t ordinal) const;

  const Block& block() const { return block_; }
  const PocketLayout& layout() const { return *layout_; }

  // Builds the canonical encoding of a set of distinct keys.
  static PocketDict encode(const PocketLayout& layout, std::span<const std::uint64_t> keys);

  // Structural checks: ones == count, exactly `buckets` zeros in the used
  // header, strictly increasing body within each bucket, zero padding.
  bool well_formed() const;

  friend bool operator==(const PocketDict& a, const PocketDict& b) { return a.block_ == b.block_; }

 private:
  struct Bucket {
    std::uint32_t header_start;  // header bit of the bucket's first 1
    std::uint32_t first_ordinal;
    std::uint32_t length;
  };
  Bucket locate(std::uint64_t quotient) const;
  std::uint32_t body_offset(std::uint32_t ordinal) const {
    return layout_->header_bits() + ordinal * layout_->remainder_width;
  }
  std::uint64_t body_at(std::uint32_t ordinal) const {
    return block_.get(body_offset(ordinal), layout_->remainder_width);
  }

  const PocketLayout* layout_;
  Block block_;
  std::uint32_t count_ = 0;
};

// m pocket dictionaries, each starting on a word boundary and padded to
// block_words words so a load never straddles an extra word.
class PocketArena {
 public:
  PocketArena() = default;
  PocketArena(const PocketLayout& layout, std::uint64_t bins);

  PocketDict load(std::uint64_t bin, ProbeCounter* probes = nullptr) const {
    return PocketDict(layout_, arena_.load(bin, probes));
  }
  void store(std::uint64_t bin, const PocketDict& pd, ProbeCounter* probes = nullptr) {
    arena_.store(bin, pd.block(), probes);
  }

  const PocketLayout& layout() const { return layout_; }
  std::uint64_t bins() const { return bins_; }
  std::uint64_t allocated_bits() const { return bins_ * layout_.block_words() * 64; }
  const BitArena& raw() const { return arena_; }
  BitArena& raw() { return arena_; }

 private:
  PocketLayout layout_;
  std::uint64_t bins_ = 0;
  BitArena arena_;
};

}  // namespace msdict
