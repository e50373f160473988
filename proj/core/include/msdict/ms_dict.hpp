#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msdict/bits.hpp"
#include "msdict/counter_dict.hpp"
#include "msdict/hashing.hpp"
#include "msdict/params.hpp"
#include "msdict/pocket_dict.hpp"
#include "msdict/spare.hpp"

namespace msdict {

enum class Status : std::uint8_t { kOk, kOverflow, kCapacity, kNotFound };
const char* to_string(Status s);

enum class Placement : std::uint8_t { kAbsent, kFirstLevel, kSpare };
enum class OpKind : std::uint8_t { kInsert = 0, kErase = 1, kCount = 2 };
inline constexpr std::size_t kOpKinds = 3;
const char* to_string(OpKind k);

struct OpStats {
  std::array<ProbeCounter, kOpKinds> max{};  // per-operation maxima
  std::array<std::uint64_t, kOpKinds> ops{};
  std::uint64_t heavy_reroutes = 0;    // multiplicity reached T_heavy
  std::uint64_t full_bd_reroutes = 0;  // bin had no free slot
  std::uint64_t full_cd_reroutes = 0;  // counter dictionary had no room
  std::uint64_t reclaims = 0;          // lazy returns to the first level
  std::uint64_t spare_distinct_max = 0;
  std::uint64_t overflow_events = 0;

  void merge(const OpStats& other);
};

struct SpaceReport {
  std::uint64_t bins_bits = 0;
  std::uint64_t counters_bits = 0;
  std::uint64_t spare_bits = 0;
  std::uint64_t seed_bits = 0;
  std::uint64_t total_bits = 0;
  double baseline_bits = 0;         // n log2(u / n)
  double overhead_per_element = 0;  // (total - baseline) / n
};

// Worst-case cost of one operation, built only from compile-time block
// limits and the configured relocation limit and queue capacity. None of
// the terms depends on n.
ProbeCounter op_ceiling(OpKind kind, const DictConfig& config);

// Dense-case multiset dictionary. First level: m pocket dictionaries with
// aligned counter dictionaries; second level: the spare. An element lives
// in the spare when its multiplicity reached T_heavy or when its bin or
// counter dictionary had no room at the time it was routed; it moves back
// lazily, only when a relocation chain in the spare evicts it.
class MsDict {
 public:
  explicit MsDict(const DictConfig& config);

  // Elements must lie in [2^universe_bits]; std::out_of_range otherwise.
  [[nodiscard]] Status insert(std::uint64_t x);
  [[nodiscard]] Status erase(std::uint64_t x);
  std::uint64_t count(std::uint64_t x) const;

  Placement placement(std::uint64_t x) const;
  SpaceReport space_report() const;

  // Full scan of every structural invariant; returns human-readable
  // violations (empty when consistent).
  std::vector<std::string> audit() const;

  // Visits every element with positive multiplicity.
  void for_each(const std::function<void(std::uint64_t x, std::uint64_t count)>& fn) const;

  const DictConfig& config() const { return config_; }
  const DerivedParams& params() const { return params_; }
  const QuotientSplitter& splitter() const { return splitter_; }
  const Spare& spare() const { return spare_; }
  const OpStats& stats() const { return stats_; }
  const ProbeCounter& last_op_cost() const { return probe_; }
  std::uint64_t cardinality() const { return cardinality_; }
  std::uint64_t op_count() const { return op_count_; }
  bool overflowed() const { return overflowed_; }

  friend void save_snapshot(const MsDict& d, std::ostream& out);
  friend MsDict load_snapshot(std::istream& in);

 private:
  void begin_op() const;
  void end_op(OpKind kind) const;
  bool reclaim(const SpareEntry& entry);
  void check_element(std::uint64_t x) const;
  Status overflow();
  ReturnHook return_hook() { return [this](const SpareEntry& e) { return reclaim(e); }; }

  DictConfig config_;
  DerivedParams params_;
  PocketLayout pocket_layout_;
  CounterLayout counter_layout_;
  QuotientSplitter splitter_;
  PocketArena bins_;
  CounterArena counters_;
  Spare spare_;
  std::uint64_t cardinality_ = 0;
  std::uint64_t op_count_ = 0;
  bool overflowed_ = false;

  mutable ProbeCounter probe_;
  mutable OpStats stats_;
};

// M independent dictionaries behind a one-round Feistel partitioner.
class PartitionedMsDict {
 public:
  explicit PartitionedMsDict(const DictConfig& config);

  [[nodiscard]] Status insert(std::uint64_t x);
  [[nodiscard]] Status erase(std::uint64_t x);
  std::uint64_t count(std::uint64_t x) const;

  std::uint32_t part_count() const { return partitioner_.part_count(); }
  const MsDict& part(std::size_t i) const { return parts_[i]; }
  const FeistelPartitioner& partitioner() const { return partitioner_; }
  std::uint64_t cardinality() const { return cardinality_; }
  std::uint64_t part_capacity() const { return part_capacity_; }

  OpStats stats() const;
  SpaceReport space_report() const;
  std::vector<std::string> audit() const;

  // Per-part capacity ceil(n/M) + ceil(4 sqrt(n/M) log2(n)^1.5).
  static std::uint64_t part_capacity_for(std::uint64_t n, std::uint32_t parts);
  // n^(9/10) rounded to the nearest power of two.
  static std::uint32_t default_part_count(std::uint64_t n);

 private:
  DictConfig config_;
  FeistelPartitioner partitioner_;
  std::uint64_t part_capacity_;
  std::vector<MsDict> parts_;
  std::uint64_t cardinality_ = 0;
};

}  // namespace msdict
