#include "msdict/counting_filter.hpp"

#include <cmath>
#include <stdexcept>

namespace msdict {

std::uint32_t CountingFilter::range_bits_for(std::uint64_t n, double epsilon) {
  return ceil_log2(static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) / epsilon)));
}

namespace {
DictConfig inner_config(const DictConfig& c, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("CountingFilter: epsilon must be in (0, 1)");
  if (c.universe_bits == 0 || c.universe_bits > kMaxUniverseBits)
    throw std::invalid_argument("CountingFilter: unsupported universe size");
  const double u = std::ldexp(1.0, static_cast<int>(c.universe_bits));
  if (static_cast<double>(c.capacity_n) / u > epsilon)
    throw std::invalid_argument("CountingFilter: epsilon below n/u; use a dictionary instead");
  DictConfig inner = c;
  inner.universe_bits = CountingFilter::range_bits_for(c.capacity_n, epsilon);
  inner.seed = mix_seed(c.seed, 0xf11e);
  return inner;
}
}  // namespace

CountingFilter::CountingFilter(const DictConfig& config, double epsilon)
    : config_(config),
      epsilon_(epsilon),
      hash_(inner_config(config, epsilon).universe_bits, mix_seed(config.seed, 0x9a1)),
      inner_(inner_config(config, epsilon)) {}

std::uint64_t CountingFilter::fingerprint(std::uint64_t x) const {
  if ((x >> config_.universe_bits) != 0) throw std::out_of_range("CountingFilter: element outside the universe");
  return hash_(x);
}

}  // namespace msdict
