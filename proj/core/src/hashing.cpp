#include "msdict/hashing.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace msdict {

std::uint64_t field::draw(std::mt19937_64& rng) {
  for (;;) {
    const std::uint64_t v = rng() >> 3;  // 61 bits
    if (v < kPrime) return v;
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PolyHash::PolyHash(std::vector<std::uint64_t> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= field::kPrime;
}

PolyHash::PolyHash(std::uint32_t k, std::mt19937_64& rng) {
  coeffs_.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) coeffs_.push_back(field::draw(rng));
}

std::uint64_t PolyHash::operator()(std::uint64_t x) const {
  std::uint64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = field::add(field::mul(acc, x), *it);
  return acc;
}

FeistelPermutation::FeistelPermutation(std::uint32_t bits, std::uint64_t seed, PermutationMode mode,
                                       std::uint32_t independence)
    : bits_(bits), left_bits_(bits / 2), right_bits_(bits - bits / 2), mode_(mode) {
  if (bits > kMaxUniverseBits) throw std::invalid_argument("FeistelPermutation: too many bits");
  if (mode_ == PermutationMode::kSeeded) {
    std::mt19937_64 rng(mix_seed(seed, 0xfe15));
    for (auto& r : rounds_) r = PolyHash(independence, rng);
  }
}

std::size_t FeistelPermutation::seed_bits() const {
  std::size_t total = 0;
  for (const auto& r : rounds_) total += r.coefficients().size() * 64;
  return total;
}

std::uint64_t FeistelPermutation::forward(std::uint64_t x) const {
  if (mode_ == PermutationMode::kIdentity) return x;
  const std::uint64_t rmask = (std::uint64_t{1} << right_bits_) - 1;
  const std::uint64_t lmask = (std::uint64_t{1} << left_bits_) - 1;
  std::uint64_t l = x >> right_bits_;
  std::uint64_t r = x & rmask;
  for (int i = 0; i < kRounds; ++i) {
    if (i % 2 == 0)
      l ^= rounds_[i](r) & lmask;
    else
      r ^= rounds_[i](l) & rmask;
  }
  return (l << right_bits_) | r;
}

std::uint64_t FeistelPermutation::inverse(std::uint64_t y) const {
  if (mode_ == PermutationMode::kIdentity) return y;
  const std::uint64_t rmask = (std::uint64_t{1} << right_bits_) - 1;
  const std::uint64_t lmask = (std::uint64_t{1} << left_bits_) - 1;
  std::uint64_t l = y >> right_bits_;
  std::uint64_t r = y & rmask;
  for (int i = kRounds - 1; i >= 0; --i) {
    if (i % 2 == 0)
      l ^= rounds_[i](r) & lmask;
    else
      r ^= rounds_[i](l) & rmask;
  }
  return (l << right_bits_) | r;
}

QuotientSplitter::QuotientSplitter(std::uint32_t universe_bits, std::uint32_t log2_m,
                                   FeistelPermutation pi)
    : remainder_bits_(universe_bits - log2_m), pi_(std::move(pi)) {
  if (log2_m > universe_bits) throw std::invalid_argument("QuotientSplitter: log2 m > universe bits");
}

QuotientSplit QuotientSplitter::split(std::uint64_t x) const { return unpack(pi_.forward(x)); }

std::uint64_t QuotientSplitter::unsplit(QuotientSplit s) const { return pi_.inverse(pack(s)); }

FeistelPartitioner::FeistelPartitioner(std::uint32_t universe_bits, std::uint32_t part_count, PolyHash f)
    : universe_bits_(universe_bits), part_count_(part_count), f_(std::move(f)) {
  if (part_count == 0 || !std::has_single_bit(part_count))
    throw std::invalid_argument("FeistelPartitioner: part count must be a power of two");
  part_bits_ = static_cast<std::uint32_t>(std::countr_zero(part_count));
  if (part_bits_ > universe_bits_)
    throw std::invalid_argument("FeistelPartitioner: more parts than universe elements");
}

FeistelPartitioner::FeistelPartitioner(std::uint32_t universe_bits, std::uint32_t part_count,
                                       std::uint32_t independence, std::uint64_t seed)
    : FeistelPartitioner(universe_bits, part_count, [&] {
        std::mt19937_64 rng(mix_seed(seed, 0x9a27));
        return PolyHash(independence, rng);
      }()) {}

PartAssignment FeistelPartitioner::partition(std::uint64_t x) const {
  const std::uint32_t rbits = reduced_bits();
  const std::uint64_t x_r = x & ((std::uint64_t{1} << rbits) - 1);
  const std::uint64_t x_l = x >> rbits;
  const std::uint64_t mask = part_count_ - 1;
  return {(x_l ^ f_(x_r)) & mask, x_r};
}

std::uint64_t FeistelPartitioner::recover(PartAssignment a) const {
  const std::uint64_t mask = part_count_ - 1;
  const std::uint64_t x_l = (a.part ^ f_(a.reduced_key)) & mask;
  return (x_l << reduced_bits()) | a.reduced_key;
}

PairwiseHash::PairwiseHash(std::uint32_t range_bits, std::uint64_t seed) : range_bits_(range_bits) {
  std::mt19937_64 rng(mix_seed(seed, 0x7a1f));
  do {
    a_ = field::draw(rng);
  } while (a_ == 0);
  b_ = field::draw(rng);
}

PairwiseHash::PairwiseHash(std::uint32_t range_bits, std::uint64_t a, std::uint64_t b)
    : range_bits_(range_bits), a_(a % field::kPrime), b_(b % field::kPrime) {
  if (a_ == 0) throw std::invalid_argument("PairwiseHash: a must be nonzero");
}

std::uint64_t PairwiseHash::operator()(std::uint64_t x) const {
  const std::uint64_t v = field::add(field::mul(a_, x % field::kPrime), b_);
  return v & ((std::uint64_t{1} << range_bits_) - 1);
}

}  // namespace msdict
