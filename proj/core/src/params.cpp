#include "msdict/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace msdict {

std::uint32_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(x - 1));
}

std::uint64_t next_pow2(std::uint64_t x) { return std::uint64_t{1} << ceil_log2(x); }

void validate(const DictConfig& c) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("DictConfig: " + what); };
  if (c.capacity_n < 4) fail("capacity_n must be at least 4");
  if (c.universe_bits == 0 || c.universe_bits > kMaxUniverseBits)
    fail("universe_bits must be in [1, " + std::to_string(kMaxUniverseBits) + "]");
  if (static_cast<double>(c.universe_bits) <= std::log2(static_cast<double>(c.capacity_n)))
    fail("universe must be strictly larger than capacity_n");
  if (!(c.delta_coeff > 0)) fail("delta_coeff must be positive");
  if (!(c.spare_slack >= 1)) fail("spare_slack must be at least 1");
  if (c.relocation_limit < 1) fail("relocation_limit must be at least 1");
  if (c.queue_capacity < 1) fail("queue_capacity must be at least 1");
  if (c.feistel_independence < 1) fail("feistel_independence must be at least 1");
  if (c.partition_count != 0 && !std::has_single_bit(c.partition_count))
    fail("partition_count must be zero or a power of two");
  if (c.heavy_threshold_override == 1) fail("heavy_threshold_override must be 0 or >= 2");
}

DerivedParams derive(const DictConfig& c) {
  validate(c);
  DerivedParams p;
  const double n = static_cast<double>(c.capacity_n);
  p.log2_n = std::log2(n);
  const double log_u_over_n = c.universe_bits - p.log2_n;
  p.B = p.log2_n / log_u_over_n;

  const auto m_raw = static_cast<std::uint64_t>(std::ceil(n / p.B));
  p.log2_m = ceil_log2(std::max<std::uint64_t>(m_raw, 1));
  if (p.log2_m >= c.universe_bits)
    throw std::invalid_argument("DictConfig: derived remainder_bits < 1");
  p.m = std::uint64_t{1} << p.log2_m;
  p.remainder_bits = c.universe_bits - p.log2_m;
  p.bin_occupancy = n / static_cast<double>(p.m);

  // Capacities follow the realized occupancy n/m; rounding m to a power
  // of two can move it up to a factor 2 away from the target B.
  const double occ = p.bin_occupancy;
  p.delta = c.delta_coeff * std::log2(p.log2_n) / std::sqrt(occ);
  const std::uint64_t key_space = std::uint64_t{1} << std::min<std::uint32_t>(p.remainder_bits, 63);
  std::uint64_t n_b = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil((1 + p.delta) * occ)));
  n_b = std::min(n_b, key_space);
  p.n_B = static_cast<std::uint32_t>(n_b);

  const auto six_b = static_cast<std::uint32_t>(std::ceil(6 * occ));
  p.cd_weight_cap = std::max(six_b, p.n_B);
  p.cd_alloc_bits = 2 * (p.cd_weight_cap + p.n_B);

  p.T_heavy = c.heavy_threshold_override != 0
                  ? c.heavy_threshold_override
                  : static_cast<std::uint64_t>(std::ceil(p.log2_n * p.log2_n * p.log2_n));
  const double log3 = p.log2_n * p.log2_n * p.log2_n;
  p.n_S = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(3 * n / log3)));

  const auto buckets = next_pow2(static_cast<std::uint64_t>(std::ceil(occ)));
  p.quotient_bits = std::min(ceil_log2(buckets), p.remainder_bits);
  p.remainder_width = p.remainder_bits - p.quotient_bits;

  const std::uint64_t pd_bits =
      p.quotient_buckets() + std::uint64_t{p.n_B} * (1 + p.remainder_width);
  p.pd_block_words = static_cast<std::uint32_t>((pd_bits + 63) / 64);
  if (p.pd_block_words > kMaxBlockWords || (p.cd_alloc_bits + 63) / 64 + 1 > kMaxBlockWords)
    throw std::invalid_argument("DictConfig: bin dictionaries exceed the constant word budget");

  p.spare_slots = static_cast<std::uint64_t>(std::ceil(c.spare_slack * static_cast<double>(p.n_S)));
  return p;
}

}  // namespace msdict
