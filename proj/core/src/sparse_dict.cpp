#include "msdict/sparse_dict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msdict {

SatelliteDict::SatelliteDict(std::uint64_t capacity, std::uint32_t payload_bits, double slack,
                             std::uint32_t relocation_limit, std::uint32_t queue_capacity, std::uint64_t seed)
    : payload_bits_(payload_bits),
      table_(SpareOptions{capacity, static_cast<std::uint64_t>(std::ceil(slack * static_cast<double>(capacity))),
                          relocation_limit, queue_capacity, seed, bits::low_mask(payload_bits)}) {
  if (payload_bits == 0 || payload_bits > 64) throw std::invalid_argument("SatelliteDict: bad payload width");
}

std::optional<std::uint64_t> SatelliteDict::retrieve(std::uint64_t x) const {
  const std::uint64_t v = table_.count(x);
  if (v == 0) return std::nullopt;
  return v;
}

Status SatelliteDict::insert(std::uint64_t x, std::uint64_t payload) {
  if (table_.count(x) != 0) throw std::logic_error("SatelliteDict::insert: element already present");
  return table_.upsert(x, payload) == SpareStatus::kOk ? Status::kOk : Status::kOverflow;
}

void SatelliteDict::update(std::uint64_t x, std::uint64_t payload) {
  if (table_.count(x) == 0) throw std::logic_error("SatelliteDict::update: element absent");
  table_.upsert(x, payload);
}

bool SatelliteDict::erase(std::uint64_t x) { return table_.erase(x) != 0; }

std::uint32_t SparseMsDict::light_counter_bits(std::uint64_t n) {
  return 3 * static_cast<std::uint32_t>(std::ceil(std::log2(std::log2(static_cast<double>(n)))));
}

std::uint64_t SparseMsDict::default_light_threshold(std::uint64_t n) {
  const double l = std::log2(static_cast<double>(n));
  return static_cast<std::uint64_t>(std::ceil(l * l * l)) - 1;
}

namespace {
std::uint64_t validated_light_threshold(const DictConfig& c) {
  validate(c);
  const std::uint64_t t = c.light_threshold_override != 0 ? c.light_threshold_override
                                                          : SparseMsDict::default_light_threshold(c.capacity_n);
  if (t >= (std::uint64_t{1} << SparseMsDict::light_counter_bits(c.capacity_n)))
    throw std::invalid_argument("SparseMsDict: light threshold does not fit the light counter width");
  return t;
}

std::uint64_t heavy_capacity(const DictConfig& c, std::uint64_t t_light) {
  // At most n / (T_light + 1) elements can be heavy at once.
  const std::uint64_t bound = (c.capacity_n + t_light) / (t_light + 1);
  return std::max<std::uint64_t>(1, 2 * bound);
}
}  // namespace

SparseMsDict::SparseMsDict(const DictConfig& config)
    : config_(config),
      light_threshold_(validated_light_threshold(config)),
      d1_(config.capacity_n, light_counter_bits(config.capacity_n), config.spare_slack, config.relocation_limit,
          config.queue_capacity, mix_seed(config.seed, 0xd1)),
      d2_(heavy_capacity(config, light_threshold_), ceil_log2(config.capacity_n + 1), config.spare_slack,
          config.relocation_limit, config.queue_capacity, mix_seed(config.seed, 0xd2)) {}

void SparseMsDict::record(OpKind kind, std::uint32_t ops) const {
  auto& m = max_dict_ops_[static_cast<std::size_t>(kind)];
  m = std::max(m, ops);
}

Status SparseMsDict::insert(std::uint64_t x) {
  if (cardinality_ >= config_.capacity_n) return Status::kCapacity;
  std::uint32_t ops = 2;
  Status st = Status::kOk;
  if (const auto h = d2_.retrieve(x)) {
    d2_.update(x, *h + 1);
    ops = 2;
  } else if (const auto l = d1_.retrieve(x)) {
    ++ops;
    if (*l + 1 <= light_threshold_) {
      d1_.update(x, *l + 1);
    } else if (!d2_.can_insert()) {
      st = Status::kOverflow;
    } else {
      d1_.erase(x);
      st = d2_.insert(x, *l + 1);
      ++ops;
    }
  } else {
    st = d1_.insert(x, 1);
    ++ops;
  }
  if (st == Status::kOk) ++cardinality_;
  record(OpKind::kInsert, ops);
  return st;
}

Status SparseMsDict::erase(std::uint64_t x) {
  std::uint32_t ops = 2;
  Status st = Status::kOk;
  if (const auto h = d2_.retrieve(x)) {
    if (*h - 1 > light_threshold_) {
      d2_.update(x, *h - 1);
    } else if (!d1_.can_insert()) {
      st = Status::kOverflow;
    } else {
      d2_.erase(x);
      st = d1_.insert(x, *h - 1);
      ++ops;
    }
  } else if (const auto l = d1_.retrieve(x)) {
    ++ops;
    if (*l == 1) d1_.erase(x);
    else d1_.update(x, *l - 1);
  } else {
    st = Status::kNotFound;
  }
  if (st == Status::kOk) --cardinality_;
  record(OpKind::kErase, ops);
  return st;
}

std::uint64_t SparseMsDict::count(std::uint64_t x) const {
  std::uint64_t c = 0;
  if (const auto h = d2_.retrieve(x)) c = *h;
  else if (const auto l = d1_.retrieve(x)) c = *l;
  record(OpKind::kCount, 2);
  return c;
}

int SparseMsDict::residence(std::uint64_t x) const {
  if (d2_.contains(x)) return 2;
  if (d1_.contains(x)) return 1;
  return 0;
}

}  // namespace msdict
