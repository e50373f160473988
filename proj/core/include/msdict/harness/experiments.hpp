#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "msdict/hashing.hpp"
#include "msdict/ms_dict.hpp"
#include "msdict/params.hpp"

namespace msdict::harness {

enum class MultiplicityLaw : std::uint8_t {
  kGeometric,  // 1 + Geometric, mean `mean_multiplicity`, truncated at max_multiplicity
  kOne,        // every element once
};

struct MultisetShape {
  std::uint64_t cardinality = 0;
  std::uint32_t universe_bits = 0;
  MultiplicityLaw law = MultiplicityLaw::kGeometric;
  double mean_multiplicity = 4.0;
  std::uint64_t max_multiplicity = ~std::uint64_t{0};
};

// Distinct uniform elements with drawn multiplicities summing to exactly
// shape.cardinality (the last multiplicity is clipped).
std::vector<std::pair<std::uint64_t, std::uint64_t>> random_multiset(const MultisetShape& shape,
                                                                     std::mt19937_64& rng);

// One entry per unit of multiplicity, shuffled.
std::vector<std::uint64_t> insertion_order(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& items,
                                           std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Reroutes caused by full counter dictionaries on random multisets.

struct Claim2Options {
  DictConfig config;  // capacity_n is the multiset cardinality
  std::uint32_t trials = 10;
  std::uint64_t seed = 1;
  MultiplicityLaw law = MultiplicityLaw::kGeometric;
  double mean_multiplicity = 4.0;
};

struct Claim2Trial {
  std::uint64_t seed = 0;
  std::uint64_t distinct = 0;
  std::uint64_t inserted = 0;
  std::uint64_t full_cd_reroutes = 0;
  std::uint64_t full_bd_reroutes = 0;
  std::uint64_t heavy_reroutes = 0;
  std::uint64_t spare_distinct_max = 0;
  bool overflowed = false;
  std::uint64_t mismatches = 0;  // final counts checked against the multiset
};

struct Claim2Stats {
  std::uint64_t n = 0;
  std::uint32_t universe_bits = 0;
  DerivedParams params;
  double bound = 0;   // n / log2(n)^3
  double budget = 0;  // 5 n / log2(n)^3
  std::vector<Claim2Trial> trials;
  OpStats ops;        // merged over trials

  double mean_cd_reroutes() const;
  std::uint64_t max_cd_reroutes() const;
  std::uint32_t trials_within_budget() const;
  bool any_overflow() const;
};

Claim2Stats claim2_experiment(const Claim2Options& options);

// ---------------------------------------------------------------------------
// Part loads under the one-round Feistel partitioner.

struct BalanceOptions {
  std::uint64_t n = 1u << 18;
  std::uint32_t universe_bits = 23;
  std::uint32_t parts = 64;
  std::uint32_t trials = 10;
  std::uint64_t seed = 1;
  std::uint32_t independence = 8;
  double flag_ratio = 1.5;
  // Replaces the seeded round function, e.g. with f = 0 for checks.
  std::optional<PolyHash> round_function;
};

struct BalanceTrial {
  std::uint64_t seed = 0;
  std::uint64_t max_part = 0;
  std::uint64_t min_part = 0;
  std::uint64_t max_part_distinct = 0;
  double ratio = 0;  // max_part / (n / M)
  bool flagged = false;
};

struct BalanceStats {
  std::uint64_t n = 0;
  std::uint32_t parts = 0;
  double mean_part = 0;
  std::uint64_t max_multiplicity = 0;
  std::vector<BalanceTrial> trials;

  double max_ratio() const;
  std::uint32_t trials_within(double ratio) const;
};

// Cardinality of every part for the given multiset.
std::vector<std::uint64_t> part_loads(const FeistelPartitioner& p,
                                      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& items);

BalanceStats balance_experiment(const BalanceOptions& options);

// ---------------------------------------------------------------------------

struct SpaceAudit {
  DictConfig config;
  DerivedParams params;
  SpaceReport space;
  std::uint64_t filled = 0;  // cardinality reached
  bool overflowed = false;
  OpStats ops;

  double spare_and_seed_bits_per_element() const;
};

// Fills a dense dictionary to cardinality n with a geometric multiset and
// reports its allocation.
SpaceAudit space_audit(const DictConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Counting-filter false positives against fresh non-members.

struct FilterOptions {
  std::uint64_t n = 1u << 16;
  std::uint32_t universe_bits = 40;
  double epsilon = 1.0 / 128;
  std::uint64_t probes = 100000;
  std::uint32_t trials = 10;
  std::uint64_t seed = 1;
};

struct FilterTrial {
  std::uint64_t seed = 0;
  std::uint32_t range_bits = 0;
  std::uint64_t probes = 0;
  std::uint64_t overcounts = 0;      // count > truth on a non-member
  std::uint64_t undercounts = 0;     // count < truth anywhere (must be 0)
  double overcount_fraction = 0;
  bool overflowed = false;
};

struct FilterStats {
  FilterOptions options;
  double threshold = 0;  // epsilon + 3 sqrt(epsilon / probes)
  std::vector<FilterTrial> trials;
};

FilterStats filter_experiment(const FilterOptions& options);

}  // namespace msdict::harness
