#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "msdict/bits.hpp"
#include "msdict/hashing.hpp"

namespace msdict {

struct SpareEntry {
  std::uint64_t key = 0;
  std::uint64_t count = 0;  // 0 marks an empty slot
  friend bool operator==(const SpareEntry&, const SpareEntry&) = default;
};

enum class SpareStatus : std::uint8_t { kOk, kOverflow, kNotFound, kReachedZero };

// Called for every entry evicted during a relocation chain. Returning true
// hands the entry over to the caller, which removes it from the spare.
using ReturnHook = std::function<bool(const SpareEntry&)>;

struct SpareOptions {
  std::uint64_t capacity = 1;          // n_S distinct keys
  std::uint64_t slots_per_table = 2;
  std::uint32_t relocation_limit = 10;
  std::uint32_t queue_capacity = 64;
  std::uint64_t seed = 0;
  std::uint64_t max_count = ~std::uint64_t{0};
};

// De-amortized cuckoo hash table (two tables, one hash function each) with
// a bounded queue of pending insertions. Each insertion performs at most
// relocation_limit placement steps; unfinished chains wait in the queue.
// Keys must be below 2^61 - 1.
class Spare {
 public:
  struct Pending {
    SpareEntry entry;
    std::uint8_t table = 0;
  };

  explicit Spare(const SpareOptions& options);

  std::uint64_t count(std::uint64_t key, ProbeCounter* probes = nullptr) const;

  // Sets the counter of key (inserting it if absent).
  SpareStatus upsert(std::uint64_t key, std::uint64_t count, const ReturnHook& hook = {},
                     ProbeCounter* probes = nullptr);
  SpareStatus decrement(std::uint64_t key, ProbeCounter* probes = nullptr);
  // Removes key regardless of its counter; returns the removed counter or 0.
  std::uint64_t erase(std::uint64_t key, ProbeCounter* probes = nullptr);

  std::uint64_t distinct_count() const { return distinct_; }
  std::size_t queue_length() const { return queue_.size(); }
  bool overflowed() const { return overflowed_; }
  // A new distinct key would be accepted without overflowing.
  bool can_accept_new() const {
    return !overflowed_ && distinct_ < options_.capacity && queue_.size() < options_.queue_capacity;
  }

  std::vector<SpareEntry> entries() const;
  const SpareOptions& options() const { return options_; }

  std::uint64_t allocated_bits() const;
  std::uint64_t seed_bits() const;

  std::uint64_t slot_of(int table, std::uint64_t key) const { return hashes_[table](key) % options_.slots_per_table; }

  // Raw state, for snapshots.
  const std::vector<SpareEntry>& table(int t) const { return tables_[t]; }
  const std::deque<Pending>& queue() const { return queue_; }
  void restore(std::vector<SpareEntry> t0, std::vector<SpareEntry> t1, std::deque<Pending> queue,
               bool overflowed);

 private:
  struct Location {
    SpareEntry* slot = nullptr;
    std::deque<Pending>::iterator queued;
    bool in_queue = false;
  };
  Location find(std::uint64_t key, ProbeCounter* probes);
  void process(const ReturnHook& hook, ProbeCounter* probes);

  SpareOptions options_;
  PolyHash hashes_[2];
  std::vector<SpareEntry> tables_[2];
  std::deque<Pending> queue_;
  std::uint64_t distinct_ = 0;
  bool overflowed_ = false;
};

}  // namespace msdict
