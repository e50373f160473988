#include "msdict/ms_dict.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace msdict {

namespace {
constexpr std::uint32_t kPermutationIndependence = 4;

void raise_max(ProbeCounter& into, const ProbeCounter& c) {
  into.words = std::max(into.words, c.words);
  into.slot_probes = std::max(into.slot_probes, c.slot_probes);
  into.queue_probes = std::max(into.queue_probes, c.queue_probes);
  into.relocations = std::max(into.relocations, c.relocations);
}
}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::kOk: return "ok";
    case Status::kOverflow: return "overflow";
    case Status::kCapacity: return "capacity";
    case Status::kNotFound: return "not_found";
  }
  return "?";
}

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::kInsert: return "insert";
    case OpKind::kErase: return "delete";
    case OpKind::kCount: return "query";
  }
  return "?";
}

ProbeCounter op_ceiling(OpKind kind, const DictConfig& config) {
  // Pocket blocks are word-aligned; counter blocks are bit-packed and may
  // straddle one extra word. A bin touch loads and stores both.
  const std::uint64_t bin_touch = 2 * kMaxBlockWords + 2 * (kMaxBlockWords + 1);
  const std::uint64_t lookup_slots = 2, lookup_queue = config.queue_capacity;
  ProbeCounter c;
  switch (kind) {
    case OpKind::kCount:
      c.words = 2 * kMaxBlockWords + 1;
      c.slot_probes = lookup_slots;
      c.queue_probes = lookup_queue;
      break;
    case OpKind::kErase:
      c.words = bin_touch;
      c.slot_probes = 2 * lookup_slots;
      c.queue_probes = 2 * lookup_queue;
      break;
    case OpKind::kInsert:
      // Each relocation step may offer the evicted element back to its bin.
      c.words = (config.relocation_limit + 1) * bin_touch;
      c.slot_probes = 2 * lookup_slots + config.relocation_limit;
      c.queue_probes = 2 * lookup_queue;
      c.relocations = config.relocation_limit;
      break;
  }
  return c;
}

void OpStats::merge(const OpStats& o) {
  for (std::size_t i = 0; i < kOpKinds; ++i) {
    raise_max(max[i], o.max[i]);
    ops[i] += o.ops[i];
  }
  heavy_reroutes += o.heavy_reroutes;
  full_bd_reroutes += o.full_bd_reroutes;
  full_cd_reroutes += o.full_cd_reroutes;
  reclaims += o.reclaims;
  spare_distinct_max = std::max(spare_distinct_max, o.spare_distinct_max);
  overflow_events += o.overflow_events;
}

MsDict::MsDict(const DictConfig& config)
    : config_(config),
      params_(derive(config)),
      pocket_layout_(PocketLayout::from(params_)),
      counter_layout_(CounterLayout::from(params_)),
      splitter_(config.universe_bits, params_.log2_m,
                FeistelPermutation(config.universe_bits, config.seed, config.permutation,
                                   kPermutationIndependence)),
      bins_(pocket_layout_, params_.m),
      counters_(counter_layout_, params_.m),
      spare_(SpareOptions{params_.n_S, params_.spare_slots, config.relocation_limit,
                          config.queue_capacity, mix_seed(config.seed, 0x59a7e), config.capacity_n}) {}

void MsDict::begin_op() const { probe_.reset(); }

void MsDict::end_op(OpKind kind) const {
  const auto k = static_cast<std::size_t>(kind);
  raise_max(stats_.max[k], probe_);
  ++stats_.ops[k];
}

void MsDict::check_element(std::uint64_t x) const {
  if (config_.universe_bits < 64 && (x >> config_.universe_bits) != 0)
    throw std::out_of_range("MsDict: element outside the universe");
}

Status MsDict::overflow() {
  overflowed_ = true;
  ++stats_.overflow_events;
  return Status::kOverflow;
}

bool MsDict::reclaim(const SpareEntry& e) {
  if (e.count >= params_.T_heavy) return false;
  const QuotientSplit s = splitter_.unpack(e.key);
  PocketDict pd = bins_.load(s.bin, &probe_);
  if (pd.full()) return false;
  CounterDict cd = counters_.load(s.bin, &probe_);
  if (!cd.can_absorb(counter_weight(e.count))) return false;
  const PdResult r = pd.insert(s.remainder);
  if (r.status != PdStatus::kOk || cd.insert_counter(r.ordinal, e.count) != CdStatus::kOk)
    throw std::logic_error("MsDict: reclaim into a bin that reported room");
  bins_.store(s.bin, pd, &probe_);
  counters_.store(s.bin, cd, &probe_);
  ++stats_.reclaims;
  return true;
}

Status MsDict::insert(std::uint64_t x) {
  check_element(x);
  begin_op();
  ++op_count_;
  const Status st = [&] {
    if (overflowed_) return Status::kOverflow;
    if (cardinality_ >= config_.capacity_n) return Status::kCapacity;
    const QuotientSplit s = splitter_.split(x);
    const std::uint64_t key = splitter_.pack(s);

    if (const std::uint64_t c = spare_.count(key, &probe_); c > 0) {
      // Strictly lazy: a spare resident stays there while it is incremented.
      spare_.upsert(key, c + 1, return_hook(), &probe_);
      return Status::kOk;
    }

    PocketDict pd = bins_.load(s.bin, &probe_);
    CounterDict cd = counters_.load(s.bin, &probe_);
    if (const auto ord = pd.query(s.remainder)) {
      const CdStatus cs = cd.increment(*ord);
      if (cs == CdStatus::kOk) {
        counters_.store(s.bin, cd, &probe_);
        return Status::kOk;
      }
      if (!spare_.can_accept_new()) return overflow();
      const std::uint64_t c = cd.remove_counter(*ord);
      pd.erase(s.remainder);
      bins_.store(s.bin, pd, &probe_);
      counters_.store(s.bin, cd, &probe_);
      ++(cs == CdStatus::kReachedHeavy ? stats_.heavy_reroutes : stats_.full_cd_reroutes);
      if (spare_.upsert(key, c + 1, return_hook(), &probe_) != SpareStatus::kOk) return overflow();
      return Status::kOk;
    }

    const bool bd_full = pd.full();
    const bool cd_full = !cd.can_absorb(counter_weight(1));
    if (bd_full || cd_full) {
      if (!spare_.can_accept_new()) return overflow();
      ++(bd_full ? stats_.full_bd_reroutes : stats_.full_cd_reroutes);
      if (spare_.upsert(key, 1, return_hook(), &probe_) != SpareStatus::kOk) return overflow();
      return Status::kOk;
    }
    const PdResult r = pd.insert(s.remainder);
    if (r.status != PdStatus::kOk || cd.insert_counter(r.ordinal, 1) != CdStatus::kOk)
      throw std::logic_error("MsDict: first-level insert failed after capacity check");
    bins_.store(s.bin, pd, &probe_);
    counters_.store(s.bin, cd, &probe_);
    return Status::kOk;
  }();
  if (st == Status::kOk) ++cardinality_;
  stats_.spare_distinct_max = std::max(stats_.spare_distinct_max, spare_.distinct_count());
  end_op(OpKind::kInsert);
  return st;
}

Status MsDict::erase(std::uint64_t x) {
  check_element(x);
  begin_op();
  ++op_count_;
  const Status st = [&] {
    if (overflowed_) return Status::kOverflow;
    const QuotientSplit s = splitter_.split(x);
    const std::uint64_t key = splitter_.pack(s);
    if (spare_.count(key, &probe_) > 0) {
      spare_.decrement(key, &probe_);
      return Status::kOk;
    }
    PocketDict pd = bins_.load(s.bin, &probe_);
    const auto ord = pd.query(s.remainder);
    if (!ord) return Status::kNotFound;
    CounterDict cd = counters_.load(s.bin, &probe_);
    if (cd.decrement(*ord) == CdStatus::kReachedZero) {
      pd.erase(s.remainder);
      bins_.store(s.bin, pd, &probe_);
    }
    counters_.store(s.bin, cd, &probe_);
    return Status::kOk;
  }();
  if (st == Status::kOk) --cardinality_;
  end_op(OpKind::kErase);
  return st;
}

std::uint64_t MsDict::count(std::uint64_t x) const {
  check_element(x);
  begin_op();
  const QuotientSplit s = splitter_.split(x);
  std::uint64_t c = spare_.count(splitter_.pack(s), &probe_);
  if (c == 0) {
    const PocketDict pd = bins_.load(s.bin, &probe_);
    if (const auto ord = pd.query(s.remainder)) c = counters_.load(s.bin, &probe_).read(*ord);
  }
  end_op(OpKind::kCount);
  return c;
}

Placement MsDict::placement(std::uint64_t x) const {
  check_element(x);
  const QuotientSplit s = splitter_.split(x);
  if (spare_.count(splitter_.pack(s)) > 0) return Placement::kSpare;
  if (bins_.load(s.bin).query(s.remainder)) return Placement::kFirstLevel;
  return Placement::kAbsent;
}

SpaceReport MsDict::space_report() const {
  SpaceReport r;
  r.bins_bits = bins_.allocated_bits();
  r.counters_bits = counters_.allocated_bits();
  r.spare_bits = spare_.allocated_bits();
  r.seed_bits = splitter_.permutation().seed_bits() + spare_.seed_bits();
  r.total_bits = r.bins_bits + r.counters_bits + r.spare_bits + r.seed_bits;
  const double n = static_cast<double>(config_.capacity_n);
  r.baseline_bits = n * (config_.universe_bits - params_.log2_n);
  r.overhead_per_element = (static_cast<double>(r.total_bits) - r.baseline_bits) / n;
  return r;
}

void MsDict::for_each(const std::function<void(std::uint64_t, std::uint64_t)>& fn) const {
  for (std::uint64_t b = 0; b < params_.m; ++b) {
    const PocketDict pd = bins_.load(b);
    if (pd.empty()) continue;
    const CounterDict cd = counters_.load(b);
    const auto keys = pd.keys();
    const auto vals = cd.values();
    for (std::size_t i = 0; i < keys.size() && i < vals.size(); ++i)
      fn(splitter_.unsplit({b, keys[i]}), vals[i]);
  }
  for (const auto& e : spare_.entries()) fn(splitter_.permutation().inverse(e.key), e.count);
}

std::vector<std::string> MsDict::audit() const {
  std::vector<std::string> bad;
  std::uint64_t total = 0;
  for (std::uint64_t b = 0; b < params_.m; ++b) {
    const PocketDict pd = bins_.load(b);
    const CounterDict cd = counters_.load(b);
    if (!pd.well_formed()) bad.push_back("bin " + std::to_string(b) + ": malformed pocket dictionary");
    if (!cd.well_formed()) bad.push_back("bin " + std::to_string(b) + ": malformed counter dictionary");
    if (pd.size() != cd.size())
      bad.push_back("bin " + std::to_string(b) + ": pocket/counter misaligned");
    for (auto v : cd.values()) total += v;
  }
  for (const auto& e : spare_.entries()) {
    total += e.count;
    const QuotientSplit s = splitter_.unpack(e.key);
    if (bins_.load(s.bin).query(s.remainder))
      bad.push_back("key " + std::to_string(e.key) + ": resident in both levels");
  }
  if (total != cardinality_)
    bad.push_back("cardinality " + std::to_string(cardinality_) + " != stored total " + std::to_string(total));
  if (spare_.distinct_count() > params_.n_S) bad.push_back("spare exceeds n_S");
  return bad;
}

// ---------------------------------------------------------------------------

std::uint64_t PartitionedMsDict::part_capacity_for(std::uint64_t n, std::uint32_t parts) {
  const double mean = static_cast<double>(n) / parts;
  const double logn = std::log2(static_cast<double>(n));
  return static_cast<std::uint64_t>(std::ceil(mean)) +
         static_cast<std::uint64_t>(std::ceil(4 * std::sqrt(mean) * std::pow(logn, 1.5)));
}

std::uint32_t PartitionedMsDict::default_part_count(std::uint64_t n) {
  const double target = std::log2(std::pow(static_cast<double>(n), 0.9));
  return 1u << static_cast<std::uint32_t>(std::lround(target));
}

namespace {
DictConfig part_config(const DictConfig& c, std::uint32_t index, std::uint64_t capacity) {
  DictConfig p = c;
  p.partition_count = 0;
  p.capacity_n = capacity;
  p.universe_bits = c.universe_bits - static_cast<std::uint32_t>(std::countr_zero(c.partition_count));
  p.seed = mix_seed(c.seed, 0x1000 + index);
  return p;
}
}  // namespace

PartitionedMsDict::PartitionedMsDict(const DictConfig& config)
    : config_(config),
      partitioner_([&] {
        validate(config);
        if (config.partition_count == 0)
          throw std::invalid_argument("PartitionedMsDict: partition_count must be positive");
        return FeistelPartitioner(config.universe_bits, config.partition_count,
                                  config.feistel_independence, config.seed);
      }()),
      part_capacity_(part_capacity_for(config.capacity_n, config.partition_count)) {
  parts_.reserve(config.partition_count);
  for (std::uint32_t i = 0; i < config.partition_count; ++i)
    parts_.emplace_back(part_config(config, i, part_capacity_));
}

Status PartitionedMsDict::insert(std::uint64_t x) {
  if (cardinality_ >= config_.capacity_n) return Status::kCapacity;
  const PartAssignment a = partitioner_.partition(x);
  const Status s = parts_[a.part].insert(a.reduced_key);
  if (s == Status::kOk) ++cardinality_;
  return s;
}

Status PartitionedMsDict::erase(std::uint64_t x) {
  const PartAssignment a = partitioner_.partition(x);
  const Status s = parts_[a.part].erase(a.reduced_key);
  if (s == Status::kOk) --cardinality_;
  return s;
}

std::uint64_t PartitionedMsDict::count(std::uint64_t x) const {
  const PartAssignment a = partitioner_.partition(x);
  return parts_[a.part].count(a.reduced_key);
}

OpStats PartitionedMsDict::stats() const {
  OpStats s;
  for (const auto& p : parts_) s.merge(p.stats());
  return s;
}

SpaceReport PartitionedMsDict::space_report() const {
  SpaceReport r;
  for (const auto& p : parts_) {
    const SpaceReport q = p.space_report();
    r.bins_bits += q.bins_bits;
    r.counters_bits += q.counters_bits;
    r.spare_bits += q.spare_bits;
    r.seed_bits += q.seed_bits;
  }
  r.seed_bits += partitioner_.f().coefficients().size() * 64;
  r.total_bits = r.bins_bits + r.counters_bits + r.spare_bits + r.seed_bits;
  const double n = static_cast<double>(config_.capacity_n);
  r.baseline_bits = n * (config_.universe_bits - std::log2(n));
  r.overhead_per_element = (static_cast<double>(r.total_bits) - r.baseline_bits) / n;
  return r;
}

std::vector<std::string> PartitionedMsDict::audit() const {
  std::vector<std::string> bad;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    for (auto& v : parts_[i].audit()) bad.push_back("part " + std::to_string(i) + ": " + v);
    total += parts_[i].cardinality();
  }
  if (total != cardinality_) bad.push_back("partition cardinalities do not sum to the total");
  return bad;
}

}  // namespace msdict
