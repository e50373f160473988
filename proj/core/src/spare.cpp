#include "msdict/spare.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace msdict {

namespace {
constexpr std::uint32_t kSlotHashIndependence = 4;  // degree-3 polynomials
}

Spare::Spare(const SpareOptions& options) : options_(options) {
  if (options_.capacity < 1 || options_.slots_per_table < 1 || options_.relocation_limit < 1 ||
      options_.queue_capacity < 1)
    throw std::invalid_argument("Spare: invalid options");
  std::mt19937_64 rng(mix_seed(options_.seed, 0x5ba2e));
  for (auto& h : hashes_) h = PolyHash(kSlotHashIndependence, rng);
  for (auto& t : tables_) t.assign(options_.slots_per_table, SpareEntry{});
}

Spare::Location Spare::find(std::uint64_t key, ProbeCounter* probes) {
  for (int t = 0; t < 2; ++t) {
    SpareEntry& e = tables_[t][slot_of(t, key)];
    if (probes != nullptr) ++probes->slot_probes;
    if (e.count != 0 && e.key == key) return {&e, {}, false};
  }
  for (auto it = queue_.begin(); it != queue_.end(); ++it) {
    if (probes != nullptr) ++probes->queue_probes;
    if (it->entry.key == key) return {nullptr, it, true};
  }
  return {};
}

std::uint64_t Spare::count(std::uint64_t key, ProbeCounter* probes) const {
  for (int t = 0; t < 2; ++t) {
    const SpareEntry& e = tables_[t][slot_of(t, key)];
    if (probes != nullptr) ++probes->slot_probes;
    if (e.count != 0 && e.key == key) return e.count;
  }
  for (const auto& p : queue_) {
    if (probes != nullptr) ++probes->queue_probes;
    if (p.entry.key == key) return p.entry.count;
  }
  return 0;
}

SpareStatus Spare::upsert(std::uint64_t key, std::uint64_t count, const ReturnHook& hook,
                          ProbeCounter* probes) {
  if (count < 1 || count > options_.max_count) throw std::out_of_range("Spare::upsert: count out of range");
  if (overflowed_) return SpareStatus::kOverflow;
  Location loc = find(key, probes);
  if (loc.slot != nullptr) {
    loc.slot->count = count;
    return SpareStatus::kOk;
  }
  if (loc.in_queue) {
    loc.queued->entry.count = count;
    return SpareStatus::kOk;
  }
  if (distinct_ + 1 > options_.capacity || queue_.size() >= options_.queue_capacity) {
    overflowed_ = true;
    return SpareStatus::kOverflow;
  }
  queue_.push_back({{key, count}, 0});
  ++distinct_;
  process(hook, probes);
  return SpareStatus::kOk;
}

void Spare::process(const ReturnHook& hook, ProbeCounter* probes) {
  // Keys already offered to the hook during this chain; each is offered
  // at most once so the chain terminates.
  std::uint64_t examined[64];
  std::size_t n_examined = 0;
  for (std::uint32_t step = 0; step < options_.relocation_limit && !queue_.empty(); ++step) {
    Pending p = queue_.front();
    queue_.pop_front();
    if (probes != nullptr) {
      ++probes->relocations;
      ++probes->slot_probes;
    }
    SpareEntry& slot = tables_[p.table][slot_of(p.table, p.entry.key)];
    const SpareEntry evicted = std::exchange(slot, p.entry);
    if (evicted.count == 0) continue;

    const bool seen = std::find(examined, examined + n_examined, evicted.key) != examined + n_examined;
    if (hook && !seen) {
      if (n_examined < std::size(examined)) examined[n_examined++] = evicted.key;
      if (hook(evicted)) {
        --distinct_;
        continue;
      }
    }
    queue_.push_front({evicted, static_cast<std::uint8_t>(1 - p.table)});
  }
}

SpareStatus Spare::decrement(std::uint64_t key, ProbeCounter* probes) {
  if (overflowed_) return SpareStatus::kOverflow;
  Location loc = find(key, probes);
  SpareEntry* e = loc.slot != nullptr ? loc.slot : loc.in_queue ? &loc.queued->entry : nullptr;
  if (e == nullptr) return SpareStatus::kNotFound;
  if (--e->count > 0) return SpareStatus::kOk;
  if (loc.in_queue) queue_.erase(loc.queued);
  else *loc.slot = SpareEntry{};
  --distinct_;
  return SpareStatus::kReachedZero;
}

std::uint64_t Spare::erase(std::uint64_t key, ProbeCounter* probes) {
  if (overflowed_) return 0;
  Location loc = find(key, probes);
  std::uint64_t c = 0;
  if (loc.slot != nullptr) {
    c = loc.slot->count;
    *loc.slot = SpareEntry{};
  } else if (loc.in_queue) {
    c = loc.queued->entry.count;
    queue_.erase(loc.queued);
  } else {
    return 0;
  }
  --distinct_;
  return c;
}

std::vector<SpareEntry> Spare::entries() const {
  std::vector<SpareEntry> out;
  for (const auto& t : tables_)
    for (const auto& e : t)
      if (e.count != 0) out.push_back(e);
  for (const auto& p : queue_) out.push_back(p.entry);
  return out;
}

std::uint64_t Spare::allocated_bits() const {
  return 2 * options_.slots_per_table * sizeof(SpareEntry) * 8 +
         std::uint64_t{options_.queue_capacity} * sizeof(Pending) * 8;
}

std::uint64_t Spare::seed_bits() const {
  return (hashes_[0].coefficients().size() + hashes_[1].coefficients().size()) * 64;
}

void Spare::restore(std::vector<SpareEntry> t0, std::vector<SpareEntry> t1, std::deque<Pending> queue,
                    bool overflowed) {
  if (t0.size() != options_.slots_per_table || t1.size() != options_.slots_per_table)
    throw std::invalid_argument("Spare::restore: table size mismatch");
  tables_[0] = std::move(t0);
  tables_[1] = std::move(t1);
  queue_ = std::move(queue);
  overflowed_ = overflowed;
  distinct_ = queue_.size();
  for (const auto& t : tables_)
    for (const auto& e : t) distinct_ += e.count != 0 ? 1 : 0;
}

}  // namespace msdict
