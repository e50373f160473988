#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "msdict/ms_dict.hpp"
#include "msdict/params.hpp"
#include "msdict/spare.hpp"

namespace msdict {

// Set dictionary over the universe with r-bit satellite data per element.
// Backed by the spare's cuckoo table; functionally complete but not
// succinct. Payloads must be nonzero.
class SatelliteDict {
 public:
  SatelliteDict(std::uint64_t capacity, std::uint32_t payload_bits, double slack,
                std::uint32_t relocation_limit, std::uint32_t queue_capacity, std::uint64_t seed);

  bool contains(std::uint64_t x) const { return table_.count(x) != 0; }
  std::optional<std::uint64_t> retrieve(std::uint64_t x) const;
  [[nodiscard]] Status insert(std::uint64_t x, std::uint64_t payload);
  void update(std::uint64_t x, std::uint64_t payload);
  bool erase(std::uint64_t x);
  bool can_insert() const { return table_.can_accept_new(); }

  std::uint64_t size() const { return table_.distinct_count(); }
  std::uint64_t capacity() const { return table_.options().capacity; }
  std::uint32_t payload_bits() const { return payload_bits_; }
  std::uint64_t allocated_bits() const { return table_.allocated_bits(); }
  bool overflowed() const { return table_.overflowed(); }

 private:
  std::uint32_t payload_bits_;
  Spare table_;
};

// Multiset dictionary from two satellite dictionaries: light elements
// (multiplicity <= T_light) with short counters in d1, heavy ones with
// full-width counters in d2.
class SparseMsDict {
 public:
  explicit SparseMsDict(const DictConfig& config);

  [[nodiscard]] Status insert(std::uint64_t x);
  [[nodiscard]] Status erase(std::uint64_t x);
  std::uint64_t count(std::uint64_t x) const;

  // 1 for d1, 2 for d2, 0 when absent.
  int residence(std::uint64_t x) const;

  std::uint64_t light_threshold() const { return light_threshold_; }
  const SatelliteDict& light() const { return d1_; }
  const SatelliteDict& heavy() const { return d2_; }
  std::uint64_t cardinality() const { return cardinality_; }
  // Satellite-dictionary operations of the most expensive call, per kind.
  const std::array<std::uint32_t, kOpKinds>& max_dict_ops() const { return max_dict_ops_; }

  static std::uint32_t light_counter_bits(std::uint64_t n);
  static std::uint64_t default_light_threshold(std::uint64_t n);

 private:
  void record(OpKind kind, std::uint32_t ops) const;

  DictConfig config_;
  std::uint64_t light_threshold_;
  SatelliteDict d1_;
  SatelliteDict d2_;
  std::uint64_t cardinality_ = 0;
  mutable std::array<std::uint32_t, kOpKinds> max_dict_ops_{};
};

}  // namespace msdict
