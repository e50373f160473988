#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "msdict/hashing.hpp"

namespace msdict {
namespace {

// Polynomial evaluation by summing c_i * x^i term by term, in 128-bit
// arithmetic with explicit reduction.
std::uint64_t naive_poly(const std::vector<std::uint64_t>& c, std::uint64_t x) {
  const unsigned __int128 p = field::kPrime;
  unsigned __int128 sum = 0, power = 1;
  for (std::uint64_t ci : c) {
    sum = (sum + (unsigned __int128)ci * power) % p;
    power = power * (x % field::kPrime) % p;
  }
  return static_cast<std::uint64_t>(sum);
}

QuotientSplitter identity_splitter(std::uint32_t ub, std::uint32_t log_m) {
  return QuotientSplitter(ub, log_m, FeistelPermutation(ub, 0, PermutationMode::kIdentity));
}

TEST(Field, ReduceAndMultiply) {
  const std::uint64_t p = field::kPrime;
  EXPECT_EQ(field::mul(p - 1, p - 1), 1u);  // (-1)^2
  EXPECT_EQ(field::mul(2, (p + 1) / 2), 1u);
  EXPECT_EQ(field::add(p - 1, 1), 0u);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t a = field::draw(rng), b = field::draw(rng);
    ASSERT_LT(a, p);
    EXPECT_EQ(field::mul(a, b), static_cast<std::uint64_t>((unsigned __int128)a * b % p));
  }
}

TEST(PolyHash, MatchesTermByTermEvaluation) {
  std::mt19937_64 rng(11);
  for (std::uint32_t k : {1u, 2u, 4u, 8u}) {
    const PolyHash h(k, rng);
    ASSERT_EQ(h.independence(), k);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t x = rng() >> 4;
      EXPECT_EQ(h(x), naive_poly(h.coefficients(), x));
    }
  }
  EXPECT_EQ(PolyHash({3, 2, 1})(10), 123u);
}

TEST(QuotientSplitter, IdentityExamples) {
  const auto s = identity_splitter(4, 2);
  EXPECT_EQ(s.split(13), (QuotientSplit{3, 1}));
  EXPECT_EQ(s.split(0), (QuotientSplit{0, 0}));
  EXPECT_EQ(s.unsplit({3, 1}), 13u);
  EXPECT_EQ(s.unsplit({0, 0}), 0u);
}

TEST(QuotientSplitter, SeededSplitIsBijectiveAt2To10) {
  const QuotientSplitter s(10, 4, FeistelPermutation(10, 99, PermutationMode::kSeeded));
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (std::uint64_t x = 0; x < 1024; ++x) {
    const QuotientSplit q = s.split(x);
    ASSERT_LT(q.bin, 16u);
    ASSERT_LT(q.remainder, 64u);
    seen.insert({q.bin, q.remainder});
  }
  EXPECT_EQ(seen.size(), 1024u);
}

TEST(QuotientSplitter, ExhaustiveRoundTripAt2To16) {
  for (std::uint32_t log_m : {0u, 5u, 11u, 16u}) {
    const QuotientSplitter s(16, log_m, FeistelPermutation(16, 1234 + log_m, PermutationMode::kSeeded));
    std::vector<bool> hit(1u << 16, false);
    for (std::uint64_t x = 0; x < (1u << 16); ++x) {
      const QuotientSplit q = s.split(x);
      const std::uint64_t packed = s.pack(q);
      ASSERT_FALSE(hit[packed]) << "collision at x=" << x;
      hit[packed] = true;
      ASSERT_EQ(s.unsplit(q), x);
      ASSERT_EQ(s.unpack(packed), q);
    }
  }
}

TEST(QuotientSplitter, RandomRoundTripLargeUniverse) {
  const QuotientSplitter s(45, 17, FeistelPermutation(45, 5, PermutationMode::kSeeded));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t x = rng() & ((std::uint64_t{1} << 45) - 1);
    EXPECT_EQ(s.unsplit(s.split(x)), x);
  }
}

TEST(FeistelPermutation, OddWidthsAreBijective) {
  for (std::uint32_t bits : {1u, 3u, 7u, 13u}) {
    const FeistelPermutation pi(bits, 77, PermutationMode::kSeeded);
    std::set<std::uint64_t> img;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << bits); ++x) {
      const std::uint64_t y = pi.forward(x);
      ASSERT_LT(y, std::uint64_t{1} << bits);
      ASSERT_EQ(pi.inverse(y), x);
      img.insert(y);
    }
    EXPECT_EQ(img.size(), std::uint64_t{1} << bits);
  }
}

TEST(FeistelPermutation, DistinctSeedsGiveDistinctPermutations) {
  const FeistelPermutation a(32, 1, PermutationMode::kSeeded);
  const FeistelPermutation b(32, 2, PermutationMode::kSeeded);
  std::mt19937_64 rng(5);
  std::set<std::uint64_t> ia, ib;
  int same_point = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = rng() & 0xffffffffu;
    ia.insert(a.forward(x));
    ib.insert(b.forward(x));
    same_point += a.forward(x) == b.forward(x);
  }
  int overlap = 0;
  for (std::uint64_t y : ia) overlap += ib.count(y);
  EXPECT_LT(overlap, 100);
  EXPECT_LT(same_point, 100);
  // Deterministic under a fixed seed.
  const FeistelPermutation a2(32, 1, PermutationMode::kSeeded);
  for (std::uint64_t x = 0; x < 1000; ++x) EXPECT_EQ(a.forward(x), a2.forward(x));
}

TEST(FeistelPartitioner, ZeroRoundFunctionKeepsPrefix) {
  const FeistelPartitioner p(16, 16, PolyHash({0}));
  for (std::uint64_t x : {0u, 1u, 0x1234u, 0xffffu}) {
    EXPECT_EQ(p.partition(x).part, x >> 12);
    EXPECT_EQ(p.partition(x).reduced_key, x & 0xfffu);
  }
}

TEST(FeistelPartitioner, ConstantRoundFunctionExample) {
  // M = 8, x_L = 3, x_R = 9 over a 7-bit universe; f = 5.
  const FeistelPartitioner p(7, 8, PolyHash({5}));
  const std::uint64_t x = (3u << 4) | 9u;
  EXPECT_EQ(p.partition(x), (PartAssignment{6, 9}));
  EXPECT_EQ(p.recover({6, 9}), x);
}

TEST(FeistelPartitioner, ExhaustiveBijectionAt2To16) {
  const FeistelPartitioner p(16, 16, 8, 42);
  std::vector<std::uint32_t> per_part(16, 0);
  std::vector<bool> hit(1u << 16, false);
  for (std::uint64_t x = 0; x < (1u << 16); ++x) {
    const PartAssignment a = p.partition(x);
    ASSERT_LT(a.part, 16u);
    ASSERT_LT(a.reduced_key, 1u << 12);
    const std::uint64_t cell = (a.part << 12) | a.reduced_key;
    ASSERT_FALSE(hit[cell]);
    hit[cell] = true;
    ++per_part[a.part];
    ASSERT_EQ(p.recover(a), x);
  }
  for (std::uint32_t c : per_part) EXPECT_EQ(c, 1u << 12);
}

TEST(FeistelPartitioner, RejectsNonPowerOfTwo) {
  EXPECT_THROW(FeistelPartitioner(16, 6, 4, 1), std::invalid_argument);
  EXPECT_THROW(FeistelPartitioner(3, 16, 4, 1), std::invalid_argument);
}

TEST(PairwiseHash, ExplicitCoefficients) {
  const PairwiseHash h(8, 3, 7);
  EXPECT_EQ(h(0), 7u);
  EXPECT_EQ(h(10), 37u);
  EXPECT_EQ(h(100), (300u + 7u) & 0xffu);
  EXPECT_THROW(PairwiseHash(8, 0, 1), std::invalid_argument);
}

TEST(MixSeed, SaltsSeparateStreams) {
  EXPECT_NE(mix_seed(1, 1), mix_seed(1, 2));
  EXPECT_NE(mix_seed(1, 1), mix_seed(2, 1));
  EXPECT_EQ(mix_seed(9, 9), mix_seed(9, 9));
}

}  // namespace
}  // namespace msdict
