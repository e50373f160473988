#include <gtest/gtest.h>

#include <map>
#include <random>

#include "msdict/ms_dict.hpp"

namespace msdict {
namespace {

DictConfig small(std::uint64_t heavy = 0) {
  DictConfig c;
  c.capacity_n = 1u << 10;
  c.universe_bits = 20;
  c.heavy_threshold_override = heavy;
  c.seed = 5;
  return c;
}

DictConfig identity(std::uint64_t heavy = 0) {
  DictConfig c = small(heavy);
  c.permutation = PermutationMode::kIdentity;
  return c;
}

// Element whose spare key lands on the same table-0 slot as `x`, found by
// scanning the universe.
std::uint64_t slot_twin(const MsDict& d, std::uint64_t x, std::uint64_t avoid_bin) {
  const auto& sp = d.splitter();
  const std::uint64_t target = d.spare().slot_of(0, sp.pack(sp.split(x)));
  for (std::uint64_t y = 1;; ++y) {
    if (y == x) continue;
    const QuotientSplit s = sp.split(y);
    if (s.bin == avoid_bin) continue;
    if (d.spare().slot_of(0, sp.pack(s)) == target) return y;
  }
}

void expect_ok(Status s) { ASSERT_EQ(s, Status::kOk); }

TEST(MsDict, RepeatedInsertStaysInFirstLevel) {
  MsDict d(small());
  for (int i = 0; i < 3; ++i) expect_ok(d.insert(77));
  EXPECT_EQ(d.count(77), 3u);
  EXPECT_EQ(d.placement(77), Placement::kFirstLevel);
  EXPECT_EQ(d.cardinality(), 3u);
}

TEST(MsDict, HeavyElementMovesToSpare) {
  MsDict d(small(4));
  for (int i = 0; i < 3; ++i) expect_ok(d.insert(77));
  EXPECT_EQ(d.placement(77), Placement::kFirstLevel);
  expect_ok(d.insert(77));
  EXPECT_EQ(d.placement(77), Placement::kSpare);
  EXPECT_EQ(d.count(77), 4u);
  EXPECT_EQ(d.stats().heavy_reroutes, 1u);
  EXPECT_TRUE(d.audit().empty());
}

TEST(MsDict, FullBinOverflowsIntoSpare) {
  MsDict d(identity());
  const std::uint32_t rb = d.params().remainder_bits;
  const std::uint32_t nb = d.params().n_B;
  const std::uint64_t bin = 3;
  for (std::uint64_t r = 0; r < nb; ++r) {
    expect_ok(d.insert((bin << rb) | r));
    EXPECT_EQ(d.placement((bin << rb) | r), Placement::kFirstLevel);
  }
  const std::uint64_t extra = (bin << rb) | nb;
  expect_ok(d.insert(extra));
  EXPECT_EQ(d.placement(extra), Placement::kSpare);
  EXPECT_EQ(d.stats().full_bd_reroutes, 1u);
  EXPECT_EQ(d.stats().full_cd_reroutes, 0u);
}

TEST(MsDict, InsertDeleteLeavesNothing) {
  MsDict d(small());
  expect_ok(d.insert(1234));
  expect_ok(d.erase(1234));
  EXPECT_EQ(d.count(1234), 0u);
  EXPECT_EQ(d.placement(1234), Placement::kAbsent);
  EXPECT_EQ(d.erase(1234), Status::kNotFound);
  EXPECT_EQ(d.erase(999), Status::kNotFound);
  EXPECT_TRUE(d.audit().empty());
  EXPECT_EQ(d.cardinality(), 0u);
}

TEST(MsDict, RejectsOutOfUniverseAndOverCapacity) {
  DictConfig c = small();
  c.capacity_n = 4;
  c.universe_bits = 10;
  MsDict d(c);
  EXPECT_THROW((void)d.insert(1u << 10), std::out_of_range);
  for (int i = 0; i < 4; ++i) expect_ok(d.insert(i));
  EXPECT_EQ(d.insert(9), Status::kCapacity);
  EXPECT_EQ(d.cardinality(), 4u);
}

TEST(MsDict, DeleteLeavesHeavyResidentInSpare) {
  MsDict d(small(4));
  for (int i = 0; i < 4; ++i) expect_ok(d.insert(77));
  expect_ok(d.erase(77));
  EXPECT_EQ(d.count(77), 3u);
  EXPECT_EQ(d.placement(77), Placement::kSpare);  // no eager return
}

TEST(MsDict, RelocationChainReclaimsEligibleEntry) {
  MsDict d(small(4));
  const std::uint64_t x = 77;
  for (int i = 0; i < 4; ++i) expect_ok(d.insert(x));
  expect_ok(d.erase(x));
  // A second heavy element hashed onto x's slot evicts x, and x (count 3,
  // below the threshold, bin has room) is handed back to its bin.
  const std::uint64_t y = slot_twin(d, x, d.splitter().split(x).bin);
  for (int i = 0; i < 4; ++i) expect_ok(d.insert(y));
  EXPECT_EQ(d.placement(y), Placement::kSpare);
  EXPECT_EQ(d.placement(x), Placement::kFirstLevel);
  EXPECT_EQ(d.count(x), 3u);
  EXPECT_EQ(d.stats().reclaims, 1u);
  EXPECT_TRUE(d.audit().empty());
}

TEST(MsDict, HeavyEntryStaysWhenEvicted) {
  MsDict d(small(4));
  const std::uint64_t x = 77;
  for (int i = 0; i < 4; ++i) expect_ok(d.insert(x));
  const std::uint64_t y = slot_twin(d, x, d.splitter().split(x).bin);
  for (int i = 0; i < 4; ++i) expect_ok(d.insert(y));
  EXPECT_EQ(d.placement(x), Placement::kSpare);
  EXPECT_EQ(d.count(x), 4u);
  EXPECT_EQ(d.stats().reclaims, 0u);
}

TEST(MsDict, EvictedEntryStaysWhileItsBinIsFull) {
  MsDict d(identity(2));
  const std::uint32_t rb = d.params().remainder_bits;
  const std::uint32_t nb = d.params().n_B;
  const std::uint64_t bin = 3;
  for (std::uint64_t r = 0; r <= nb; ++r) expect_ok(d.insert((bin << rb) | r));
  const std::uint64_t extra = (bin << rb) | nb;
  ASSERT_EQ(d.placement(extra), Placement::kSpare);

  const std::uint64_t z = slot_twin(d, extra, bin);
  expect_ok(d.insert(z));
  expect_ok(d.insert(z));  // reaches T_heavy and evicts `extra`
  EXPECT_EQ(d.placement(z), Placement::kSpare);
  EXPECT_EQ(d.placement(extra), Placement::kSpare);
  EXPECT_EQ(d.count(extra), 1u);
  EXPECT_EQ(d.stats().reclaims, 0u);
  EXPECT_TRUE(d.audit().empty());
}

TEST(MsDict, RandomOpsAgainstMap) {
  // A small hot pool drives elements across T_heavy and back; cold keys
  // keep the bins busy. The hot pool is smaller than n_S, so the spare
  // cannot run out however the lazy returns play out.
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    DictConfig c;
    c.capacity_n = 1u << 16;
    c.universe_bits = 24;
    c.seed = seed;
    c.heavy_threshold_override = 8;
    MsDict d(c);
    ASSERT_EQ(d.params().n_S, 48u);
    std::vector<std::uint64_t> hot(30);
    std::mt19937_64 rng(seed);
    for (auto& h : hot) h = rng() & 0xffffff;
    std::map<std::uint64_t, std::uint64_t> ref;
    std::uint64_t card = 0;
    for (int i = 0; i < 100000; ++i) {
      const std::uint64_t x = rng() % 2 ? hot[rng() % hot.size()] : 1000 + rng() % 3000;
      const int op = static_cast<int>(rng() % 3);
      if (op == 0 && card < 2048) {
        expect_ok(d.insert(x));
        ++ref[x];
        ++card;
      } else if (op == 1) {
        const Status st = d.erase(x);
        if (ref.count(x)) {
          ASSERT_EQ(st, Status::kOk);
          --card;
          if (--ref[x] == 0) ref.erase(x);
        } else {
          ASSERT_EQ(st, Status::kNotFound);
        }
      } else {
        const auto it = ref.find(x);
        ASSERT_EQ(d.count(x), it == ref.end() ? 0 : it->second) << "seed " << seed << " op " << i;
      }
      if (i % 5000 == 0) {
        ASSERT_TRUE(d.audit().empty());
      }
    }
    std::map<std::uint64_t, std::uint64_t> seen;
    d.for_each([&](std::uint64_t x, std::uint64_t n) { seen[x] += n; });
    EXPECT_EQ(seen, ref);
    EXPECT_GT(d.stats().heavy_reroutes, 0u);
    EXPECT_FALSE(d.overflowed());
  }
}

TEST(MsDict, SpaceReportArithmetic) {
  DictConfig c;
  c.capacity_n = 1u << 14;
  c.universe_bits = 19;
  MsDict d(c);
  const DerivedParams& p = d.params();
  const SpaceReport r = d.space_report();
  const std::uint64_t pd_bits = p.quotient_buckets() + p.n_B * (1 + p.remainder_width);
  EXPECT_EQ(r.bins_bits, p.m * ((pd_bits + 63) / 64) * 64);
  EXPECT_EQ(r.counters_bits, p.m * p.cd_alloc_bits);
  EXPECT_EQ(r.total_bits, r.bins_bits + r.counters_bits + r.spare_bits + r.seed_bits);
  EXPECT_DOUBLE_EQ(r.baseline_bits, 16384.0 * 5);
}

TEST(MsDict, ProbeMaximaStayUnderCeiling) {
  for (std::uint32_t lg : {12u, 14u, 16u}) {
    DictConfig c;
    c.capacity_n = std::uint64_t{1} << lg;
    c.universe_bits = lg + 5;
    c.heavy_threshold_override = 8;
    MsDict d(c);
    std::mt19937_64 rng(lg);
    for (std::uint64_t i = 0; i < c.capacity_n; ++i) expect_ok(d.insert(rng() % (c.capacity_n / 2)));
    for (std::uint64_t i = 0; i < c.capacity_n / 2; ++i) (void)d.erase(rng() % (c.capacity_n / 2));
    for (std::size_t k = 0; k < kOpKinds; ++k) {
      const ProbeCounter cap = op_ceiling(static_cast<OpKind>(k), c);
      const ProbeCounter& got = d.stats().max[k];
      EXPECT_LE(got.words, cap.words);
      EXPECT_LE(got.slot_probes, cap.slot_probes);
      EXPECT_LE(got.queue_probes, cap.queue_probes);
      EXPECT_LE(got.relocations, cap.relocations);
    }
  }
}

TEST(PartitionedMsDict, RandomOpsAgainstMap) {
  DictConfig c;
  c.capacity_n = 1u << 12;
  c.universe_bits = 22;
  c.partition_count = 16;
  PartitionedMsDict d(c);
  std::map<std::uint64_t, std::uint64_t> ref;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t x = rng() & ((1u << 22) - 1);
    if (rng() % 2 == 0 && d.cardinality() < c.capacity_n) {
      expect_ok(d.insert(x));
      ++ref[x];
    } else if (!ref.empty()) {
      const auto it = ref.begin();
      expect_ok(d.erase(it->first));
      if (--it->second == 0) ref.erase(it);
    }
  }
  for (const auto& [x, f] : ref) EXPECT_EQ(d.count(x), f);
  EXPECT_TRUE(d.audit().empty());
  EXPECT_EQ(PartitionedMsDict::default_part_count(1u << 20), 1u << 18);
}

}  // namespace
}  // namespace msdict
