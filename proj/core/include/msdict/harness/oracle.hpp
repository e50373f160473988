#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace msdict::harness {

// Plain hash-map multiset used as ground truth. Also keeps a dense list of
// the present elements so a uniformly random one can be drawn in O(1).
class ReferenceMultiset {
 public:
  void insert(std::uint64_t x);
  // False when x is absent.
  bool erase(std::uint64_t x);
  std::uint64_t count(std::uint64_t x) const;

  std::uint64_t cardinality() const { return cardinality_; }
  std::size_t distinct() const { return present_.size(); }
  bool empty() const { return present_.empty(); }

  // Uniform over distinct present elements. Requires !empty().
  std::uint64_t sample(std::mt19937_64& rng) const;

  const std::vector<std::uint64_t>& elements() const { return present_; }

 private:
  struct Slot {
    std::uint64_t count = 0;
    std::size_t index = 0;
  };
  std::unordered_map<std::uint64_t, Slot> slots_;
  std::vector<std::uint64_t> present_;
  std::uint64_t cardinality_ = 0;
};

}  // namespace msdict::harness
