#pragma once

#include <cstdint>

#include "msdict/hashing.hpp"
#include "msdict/ms_dict.hpp"
#include "msdict/params.hpp"

namespace msdict {

// Counting filter: elements are mapped to fingerprints in [R], R the next
// power of two >= n / epsilon, by a pairwise-independent hash, and the
// fingerprint multiset is kept exactly in a dense dictionary. Counts are
// never below the true multiplicity.
//
// erase(x) must only be called for an x with positive multiplicity;
// otherwise the counts of colliding elements are silently corrupted.
class CountingFilter {
 public:
  // config.universe_bits describes the input universe; config.capacity_n
  // bounds the total cardinality.
  CountingFilter(const DictConfig& config, double epsilon);

  [[nodiscard]] Status insert(std::uint64_t x) { return inner_.insert(fingerprint(x)); }
  [[nodiscard]] Status erase(std::uint64_t x) { return inner_.erase(fingerprint(x)); }
  std::uint64_t count(std::uint64_t x) const { return inner_.count(fingerprint(x)); }

  std::uint64_t fingerprint(std::uint64_t x) const;
  double epsilon() const { return epsilon_; }
  std::uint32_t range_bits() const { return hash_.range_bits(); }
  const MsDict& inner() const { return inner_; }
  const PairwiseHash& hash() const { return hash_; }

  static std::uint32_t range_bits_for(std::uint64_t n, double epsilon);

 private:
  DictConfig config_;
  double epsilon_;
  PairwiseHash hash_;
  MsDict inner_;
};

}  // namespace msdict
