#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "msdict/params.hpp"

namespace msdict {

// Arithmetic in GF(p) with p = 2^61 - 1.
namespace field {
inline constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
__extension__ using u128 = unsigned __int128;

inline std::uint64_t reduce(u128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;
  while (r >= kPrime) r -= kPrime;
  return r;
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return reduce(static_cast<u128>(a) * b);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r >= kPrime ? r - kPrime : r;
}
// Uniform element of [0, p) drawn from raw generator output.
std::uint64_t draw(std::mt19937_64& rng);
}  // namespace field

// Polynomial of degree k-1 over GF(p); evaluations on k distinct points
// are k-wise independent over the choice of coefficients.
class PolyHash {
 public:
  PolyHash() = default;
  explicit PolyHash(std::vector<std::uint64_t> coeffs);  // c0 + c1 x + ...
  PolyHash(std::uint32_t k, std::mt19937_64& rng);

  // Horner evaluation at x (x must be < p).
  std::uint64_t operator()(std::uint64_t x) const;
  const std::vector<std::uint64_t>& coefficients() const { return coeffs_; }
  std::uint32_t independence() const { return static_cast<std::uint32_t>(coeffs_.size()); }

 private:
  std::vector<std::uint64_t> coeffs_;
};

// Seeded permutation of [2^bits]: alternating 4-round Feistel network.
// The left half is the high floor(bits/2) bits; the right half the rest.
class FeistelPermutation {
 public:
  static constexpr int kRounds = 4;

  FeistelPermutation() = default;
  FeistelPermutation(std::uint32_t bits, std::uint64_t seed, PermutationMode mode,
                     std::uint32_t independence = 4);

  std::uint64_t forward(std::uint64_t x) const;
  std::uint64_t inverse(std::uint64_t y) const;

  std::uint32_t bits() const { return bits_; }
  PermutationMode mode() const { return mode_; }
  std::size_t seed_bits() const;

 private:
  std::uint32_t bits_ = 0;
  std::uint32_t left_bits_ = 0;
  std::uint32_t right_bits_ = 0;
  PermutationMode mode_ = PermutationMode::kIdentity;
  std::array<PolyHash, kRounds> rounds_;
};

struct QuotientSplit {
  std::uint64_t bin = 0;
  std::uint64_t remainder = 0;
  friend bool operator==(const QuotientSplit&, const QuotientSplit&) = default;
};

// h^b / h^r: the leftmost log m bits of pi(x) and the remaining bits.
class QuotientSplitter {
 public:
  QuotientSplitter() = default;
  QuotientSplitter(std::uint32_t universe_bits, std::uint32_t log2_m, FeistelPermutation pi);

  QuotientSplit split(std::uint64_t x) const;
  std::uint64_t unsplit(QuotientSplit s) const;

  // pi(x) packed as bin * 2^remainder_bits + remainder.
  std::uint64_t pack(QuotientSplit s) const { return (s.bin << remainder_bits_) | s.remainder; }
  QuotientSplit unpack(std::uint64_t key) const {
    return {key >> remainder_bits_, key & ((std::uint64_t{1} << remainder_bits_) - 1)};
  }

  std::uint32_t remainder_bits() const { return remainder_bits_; }
  const FeistelPermutation& permutation() const { return pi_; }

 private:
  std::uint32_t remainder_bits_ = 0;
  FeistelPermutation pi_;
};

struct PartAssignment {
  std::uint64_t part = 0;
  std::uint64_t reduced_key = 0;
  friend bool operator==(const PartAssignment&, const PartAssignment&) = default;
};

// One-round Feistel split of the universe into M parts:
// part = x_L xor f(x_R), reduced_key = x_R.
class FeistelPartitioner {
 public:
  FeistelPartitioner(std::uint32_t universe_bits, std::uint32_t part_count, PolyHash f);
  FeistelPartitioner(std::uint32_t universe_bits, std::uint32_t part_count,
                     std::uint32_t independence, std::uint64_t seed);

  PartAssignment partition(std::uint64_t x) const;
  std::uint64_t recover(PartAssignment a) const;

  std::uint32_t part_count() const { return part_count_; }
  std::uint32_t part_bits() const { return part_bits_; }
  std::uint32_t reduced_bits() const { return universe_bits_ - part_bits_; }
  const PolyHash& f() const { return f_; }

 private:
  std::uint32_t universe_bits_;
  std::uint32_t part_count_;
  std::uint32_t part_bits_;
  PolyHash f_;
};

// (a x + b mod p) mod 2^range_bits, a != 0.
class PairwiseHash {
 public:
  PairwiseHash() = default;
  PairwiseHash(std::uint32_t range_bits, std::uint64_t seed);
  PairwiseHash(std::uint32_t range_bits, std::uint64_t a, std::uint64_t b);

  std::uint64_t operator()(std::uint64_t x) const;
  std::uint32_t range_bits() const { return range_bits_; }
  std::uint64_t a() const { return a_; }
  std::uint64_t b() const { return b_; }

 private:
  std::uint32_t range_bits_ = 0;
  std::uint64_t a_ = 1;
  std::uint64_t b_ = 0;
};

// SplitMix64 finalizer; derives independent sub-seeds from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace msdict
