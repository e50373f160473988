#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "msdict/params.hpp"

namespace msdict {
namespace {

DictConfig config(std::uint64_t n, std::uint32_t ub) {
  DictConfig c;
  c.capacity_n = n;
  c.universe_bits = ub;
  return c;
}

// Straight-line evaluation of the capacity formulas, kept separate from
// derive() so the two can disagree.
struct Reference {
  std::uint64_t m;
  std::uint32_t remainder_bits;
  std::uint64_t T_heavy;
  std::uint64_t n_S;
  std::uint32_t n_B;
  std::uint32_t cd_weight_cap;
  std::uint32_t cd_alloc_bits;
};

Reference reference(std::uint64_t n, std::uint32_t ub, double c_delta = 1.0) {
  const long double lg = std::log2((long double)n);
  const long double B = lg / (ub - lg);
  std::uint64_t m = 1;
  while ((long double)m < std::ceil((long double)n / B)) m *= 2;
  std::uint32_t log_m = 0;
  while ((std::uint64_t{1} << log_m) < m) ++log_m;
  const long double occ = (long double)n / m;
  const long double delta = c_delta * std::log2(lg) / std::sqrt(occ);
  long double nb = std::ceil((1 + delta) * occ);
  if (nb < 2) nb = 2;
  const long double rb_space = std::pow(2.0L, ub - log_m);
  if (nb > rb_space) nb = rb_space;
  auto cap = static_cast<std::uint32_t>(std::ceil(6 * occ));
  if (cap < nb) cap = static_cast<std::uint32_t>(nb);
  return {m,
          ub - log_m,
          static_cast<std::uint64_t>(std::ceil(lg * lg * lg)),
          static_cast<std::uint64_t>(std::ceil(3 * n / (lg * lg * lg))),
          static_cast<std::uint32_t>(nb),
          cap,
          2 * (cap + static_cast<std::uint32_t>(nb))};
}

TEST(Params, LargeGapExample) {
  const DerivedParams p = derive(config(1u << 20, 25));
  EXPECT_DOUBLE_EQ(p.B, 4.0);
  EXPECT_EQ(p.m, 1u << 18);
  EXPECT_EQ(p.remainder_bits, 7u);
  EXPECT_EQ(p.T_heavy, 8000u);
  EXPECT_EQ(p.n_S, 394u);
}

TEST(Params, MediumExample) {
  const DerivedParams p = derive(config(1u << 16, 24));
  EXPECT_DOUBLE_EQ(p.B, 2.0);
  EXPECT_EQ(p.m, 1u << 15);
  EXPECT_EQ(p.T_heavy, 4096u);
}

TEST(Params, OccupancyNeedNotDivideN) {
  const DerivedParams p = derive(config(1u << 20, 21));
  EXPECT_DOUBLE_EQ(p.B, 20.0);
  EXPECT_EQ(p.m, 1u << 16);
  EXPECT_EQ(p.remainder_bits, 5u);
  EXPECT_DOUBLE_EQ(p.bin_occupancy, 16.0);
}

TEST(Params, FrozenCapacities) {
  // n = 2^20, u = 2^25: occupancy 4, delta = log2(20) / 2.
  const DerivedParams p = derive(config(1u << 20, 25));
  EXPECT_EQ(p.n_B, 13u);
  EXPECT_EQ(p.cd_weight_cap, 24u);
  EXPECT_EQ(p.cd_alloc_bits, 74u);
  EXPECT_EQ(p.quotient_bits, 2u);
  EXPECT_EQ(p.remainder_width, 5u);
  EXPECT_EQ(p.pd_block_words, 2u);
  EXPECT_EQ(p.spare_slots, 788u);
}

TEST(Params, MatchesReferenceAcrossSizes) {
  for (std::uint32_t lg = 4; lg <= 26; ++lg) {
    for (std::uint32_t gap : {1u, 2u, 3u, 5u, 8u, 12u}) {
      const std::uint64_t n = std::uint64_t{1} << lg;
      const std::uint32_t ub = lg + gap;
      if (ub > kMaxUniverseBits) continue;
      DerivedParams p;
      try {
        p = derive(config(n, ub));
      } catch (const std::invalid_argument&) {
        continue;  // bins too wide for the word budget
      }
      const Reference r = reference(n, ub);
      SCOPED_TRACE("n=2^" + std::to_string(lg) + " ub=" + std::to_string(ub));
      EXPECT_EQ(p.m, r.m);
      EXPECT_EQ(p.remainder_bits, r.remainder_bits);
      EXPECT_EQ(p.T_heavy, r.T_heavy);
      EXPECT_EQ(p.n_S, std::max<std::uint64_t>(1, r.n_S));
      EXPECT_EQ(p.n_B, r.n_B);
      EXPECT_EQ(p.cd_weight_cap, r.cd_weight_cap);
      EXPECT_EQ(p.cd_alloc_bits, r.cd_alloc_bits);
    }
  }
}

TEST(Params, Invariants) {
  for (std::uint32_t lg = 2; lg <= 24; ++lg) {
    std::uint64_t prev_m = 0;
    for (std::uint64_t n : {std::uint64_t{1} << lg, (std::uint64_t{3} << lg) / 2}) {
      for (std::uint32_t ub = lg + 1; ub <= lg + 16 && ub <= kMaxUniverseBits; ub += 3) {
        DerivedParams p;
        try {
          p = derive(config(n, ub));
        } catch (const std::invalid_argument&) {
          continue;
        }
        EXPECT_GE(p.m * p.n_B, n);
        EXPECT_GE(p.cd_weight_cap, p.n_B);
        EXPECT_EQ(p.remainder_bits + p.log2_m, ub);
        EXPECT_EQ(p.m, std::uint64_t{1} << p.log2_m);
        EXPECT_LE(p.pd_block_words, kMaxBlockWords);
        EXPECT_EQ(p, derive(config(n, ub)));
      }
    }
    // Growing n at a fixed universe never shrinks m.
    for (std::uint64_t n = 16; n < (1u << 16); n = n * 3 / 2) {
      const DerivedParams p = derive(config(n, 24));
      EXPECT_GE(p.m, prev_m);
      prev_m = p.m;
    }
  }
}

TEST(Params, RejectsBadConfigs) {
  EXPECT_THROW(derive(config(1u << 16, 16)), std::invalid_argument);
  EXPECT_THROW(derive(config(1u << 16, 10)), std::invalid_argument);
  EXPECT_THROW(derive(config(1u << 10, 61)), std::invalid_argument);
  DictConfig c = config(1u << 12, 20);
  c.delta_coeff = 0;
  EXPECT_THROW(derive(c), std::invalid_argument);
  c = config(1u << 12, 20);
  c.relocation_limit = 0;
  EXPECT_THROW(derive(c), std::invalid_argument);
  c = config(1u << 12, 20);
  c.queue_capacity = 0;
  EXPECT_THROW(derive(c), std::invalid_argument);
  c = config(1u << 12, 20);
  c.spare_slack = 0.5;
  EXPECT_THROW(derive(c), std::invalid_argument);
  c = config(1u << 12, 20);
  c.partition_count = 6;
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(Params, Helpers) {
  EXPECT_EQ(ceil_log2(1), 0u);
  EXPECT_EQ(ceil_log2(2), 1u);
  EXPECT_EQ(ceil_log2(5), 3u);
  EXPECT_EQ(ceil_log2(1u << 20), 20u);
  EXPECT_EQ(next_pow2(1), 1u);
  EXPECT_EQ(next_pow2(5), 8u);
  EXPECT_EQ(next_pow2(64), 64u);
}

}  // namespace
}  // namespace msdict
