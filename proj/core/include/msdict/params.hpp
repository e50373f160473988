#pragma once

#include <cstddef>
#include <cstdint>

namespace msdict {

// Upper bound on the 64-bit words a bin or counter dictionary may span.
// derive() rejects configurations whose bins do not fit.
inline constexpr std::uint32_t kMaxBlockWords = 16;

// The largest supported universe. Keys are evaluated in the Mersenne
// field of 2^61 - 1, so every element must be strictly below it.
inline constexpr std::uint32_t kMaxUniverseBits = 60;

enum class PermutationMode : std::uint8_t {
  kSeeded,    // 4-round Feistel network over the universe bits
  kIdentity,  // pi(x) = x, for crafted tests
};

struct DictConfig {
  std::uint64_t capacity_n = 1u << 16;  // bound on total cardinality
  std::uint32_t universe_bits = 24;     // log2 u
  double delta_coeff = 1.0;             // c_delta in delta = c_delta loglog n / sqrt(B)
  double spare_slack = 2.0;             // slots per table / n_S
  std::uint32_t relocation_limit = 10;  // cuckoo moves per operation
  std::uint32_t queue_capacity = 64;
  std::uint64_t seed = 0x6d73646963740001ULL;
  std::uint32_t partition_count = 0;    // 0: single part
  std::uint32_t feistel_independence = 8;  // k' for the partitioner
  PermutationMode permutation = PermutationMode::kSeeded;

  // Test knobs. Zero keeps the derived value.
  std::uint64_t heavy_threshold_override = 0;
  std::uint64_t light_threshold_override = 0;

  friend bool operator==(const DictConfig&, const DictConfig&) = default;
};

struct DerivedParams {
  double log2_n = 0;
  double B = 0;               // target occupancy log n / log(u/n)
  double bin_occupancy = 0;   // realized mean occupancy n / m
  double delta = 0;
  std::uint64_t m = 0;        // bin count, a power of two
  std::uint32_t log2_m = 0;
  std::uint32_t n_B = 0;      // distinct elements per bin
  std::uint32_t cd_weight_cap = 0;
  std::uint32_t cd_alloc_bits = 0;
  std::uint64_t T_heavy = 0;
  std::uint64_t n_S = 0;
  std::uint32_t remainder_bits = 0;  // log2(u / m)
  std::uint32_t quotient_bits = 0;   // log2 of the quotient bucket count
  std::uint32_t remainder_width = 0; // body entry width in a pocket dictionary
  std::uint32_t pd_block_words = 0;
  std::uint64_t spare_slots = 0;     // per table

  std::uint32_t quotient_buckets() const { return 1u << quotient_bits; }

  friend bool operator==(const DerivedParams&, const DerivedParams&) = default;
};

// Throws std::invalid_argument when the configuration is unusable.
void validate(const DictConfig& config);

// Computes every capacity and threshold of the construction. Pure.
DerivedParams derive(const DictConfig& config);

std::uint32_t ceil_log2(std::uint64_t x);
std::uint64_t next_pow2(std::uint64_t x);

}  // namespace msdict
