#include "msdict/pocket_dict.hpp"

#include <algorithm>
#include <stdexcept>

namespace msdict {

PocketDict::PocketDict(const PocketLayout& layout) : layout_(&layout) {
  if (layout.block_words() > kMaxBlockWords)
    throw std::invalid_argument("PocketDict: layout exceeds the block word budget");
}

PocketDict::PocketDict(const PocketLayout& layout, const Block& block)
    : layout_(&layout), block_(block) {
  count_ = static_cast<std::uint32_t>(block_.popcount(layout.header_bits()));
}

PocketDict::Bucket PocketDict::locate(std::uint64_t quotient) const {
  const std::uint32_t hb = layout_->header_bits();
  const auto q = static_cast<std::uint32_t>(quotient);
  const std::uint32_t start = q == 0 ? 0 : static_cast<std::uint32_t>(block_.select0(hb, q - 1)) + 1;
  const auto end = static_cast<std::uint32_t>(block_.select0(hb, q));
  return {start, start - q, end - start};
}

std::optional<std::uint32_t> PocketDict::query(std::uint64_t key) const {
  const std::uint32_t w = layout_->remainder_width;
  const Bucket b = locate(key >> w);
  const std::uint64_t r = key & bits::low_mask(w);
  for (std::uint32_t i = 0; i < b.length; ++i) {
    const std::uint64_t v = body_at(b.first_ordinal + i);
    if (v == r) return b.first_ordinal + i;
    if (v > r) break;
  }
  return std::nullopt;
}

PdResult PocketDict::insert(std::uint64_t key) {
  const std::uint32_t w = layout_->remainder_width;
  const Bucket b = locate(key >> w);
  const std::uint64_t r = key & bits::low_mask(w);
  std::uint32_t j = 0;
  for (; j < b.length; ++j) {
    const std::uint64_t v = body_at(b.first_ordinal + j);
    if (v == r) return {PdStatus::kDuplicate, b.first_ordinal + j};
    if (v > r) break;
  }
  if (full()) return {PdStatus::kFull, 0};

  const std::uint32_t used_header = layout_->buckets() + count_;
  const std::uint32_t pos = b.header_start + j;
  block_.move(pos, pos + 1, used_header - pos);
  block_.set(pos, 1, 1);

  const std::uint32_t ord = b.first_ordinal + j;
  const std::uint32_t body_end = body_offset(count_);
  block_.move(body_offset(ord), body_offset(ord) + w, body_end - body_offset(ord));
  block_.set(body_offset(ord), w, r);
  ++count_;
  return {PdStatus::kOk, ord};
}

PdResult PocketDict::erase(std::uint64_t key) {
  const auto ord = query(key);
  if (!ord) return {PdStatus::kNotFound, 0};
  const std::uint32_t w = layout_->remainder_width;
  const Bucket b = locate(key >> w);
  const std::uint32_t pos = b.header_start + (*ord - b.first_ordinal);
  const std::uint32_t used_header = layout_->buckets() + count_;
  block_.move(pos + 1, pos, used_header - pos - 1);
  block_.set(used_header - 1, 1, 0);

  const std::uint32_t body_end = body_offset(count_);
  const std::uint32_t at = body_offset(*ord);
  block_.move(at + w, at, body_end - at - w);
  block_.clear_range(body_end - w, w);
  --count_;
  return {PdStatus::kOk, *ord};
}

std::uint64_t PocketDict::key_at(std::uint32_t ordinal) const {
  if (ordinal >= count_) throw std::out_of_range("PocketDict::key_at");
  // The ordinal-th one sits at header position ordinal + quotient.
  std::uint32_t ones = 0;
  std::uint32_t zeros = 0;
  for (std::uint32_t pos = 0;; ++pos) {
    if (block_.test(pos)) {
      if (ones == ordinal) break;
      ++ones;
    } else {
      ++zeros;
    }
  }
  return (std::uint64_t{zeros} << layout_->remainder_width) | body_at(ordinal);
}

std::vector<std::uint64_t> PocketDict::keys() const {
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  std::uint64_t q = 0;
  std::uint32_t ord = 0;
  const std::uint32_t used = layout_->buckets() + count_;
  for (std::uint32_t pos = 0; pos < used; ++pos) {
    if (block_.test(pos)) {
      out.push_back((q << layout_->remainder_width) | body_at(ord));
      ++ord;
    } else {
      ++q;
    }
  }
  return out;
}

PocketDict PocketDict::encode(const PocketLayout& layout, std::span<const std::uint64_t> keys) {
  std::vector<std::uint64_t> sorted(keys.begin(), keys.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("PocketDict::encode: duplicate keys");
  if (sorted.size() > layout.capacity) throw std::invalid_argument("PocketDict::encode: too many keys");
  PocketDict pd(layout);
  std::uint32_t pos = 0;
  std::uint64_t q = 0;
  for (std::uint32_t i = 0; i < sorted.size(); ++i) {
    const std::uint64_t kq = sorted[i] >> layout.remainder_width;
    if (kq >= layout.buckets()) throw std::invalid_argument("PocketDict::encode: key out of range");
    while (q < kq) {
      ++pos;  // zero terminator
      ++q;
    }
    pd.block_.set(pos++, 1, 1);
    pd.block_.set(layout.header_bits() + i * layout.remainder_width, layout.remainder_width,
                  sorted[i] & bits::low_mask(layout.remainder_width));
  }
  pd.count_ = static_cast<std::uint32_t>(sorted.size());
  return pd;
}

bool PocketDict::well_formed() const {
  const std::uint32_t hb = layout_->header_bits();
  if (count_ > layout_->capacity) return false;
  const std::uint32_t used = layout_->buckets() + count_;
  if (block_.popcount(used) != count_) return false;
  // Unused header tail must be zero and the last used bit a terminator.
  for (std::uint32_t pos = used; pos < hb; ++pos)
    if (block_.test(pos)) return false;
  if (block_.test(used - 1)) return false;
  const auto ks = keys();
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (ks[i] <= ks[i - 1]) return false;
  const std::uint32_t body_end = body_offset(count_);
  const std::uint32_t total = layout_->total_bits();
  for (std::uint32_t pos = body_end; pos < total; ++pos)
    if (block_.test(pos)) return false;
  return true;
}

PocketArena::PocketArena(const PocketLayout& layout, std::uint64_t bins)
    : layout_(layout), bins_(bins), arena_(bins, std::size_t{layout.block_words()} * 64) {}

}  // namespace msdict
