#include "msdict/counter_dict.hpp"

#include <stdexcept>

namespace msdict {
namespace {

constexpr std::uint64_t kLowSymbolBits = 0x5555555555555555ULL;

std::uint64_t eoc_mask(std::uint64_t w) { return w & (w >> 1) & kLowSymbolBits; }
std::uint64_t nonempty_mask(std::uint64_t w) { return (w | (w >> 1)) & kLowSymbolBits; }

}  // namespace

std::vector<Symbol> encode_counter(std::uint64_t c, std::uint64_t heavy_threshold) {
  if (c < 1 || c >= heavy_threshold) throw std::out_of_range("encode_counter: value out of range");
  std::vector<Symbol> out;
  for (int b = static_cast<int>(counter_weight(c)) - 1; b >= 0; --b)
    out.push_back(((c >> b) & 1u) ? Symbol::kOne : Symbol::kZero);
  out.push_back(Symbol::kEoc);
  return out;
}

std::uint64_t decode_counter(const std::vector<Symbol>& symbols) {
  if (symbols.size() < 2 || symbols.back() != Symbol::kEoc || symbols.front() != Symbol::kOne)
    throw std::invalid_argument("decode_counter: malformed counter");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
    if (symbols[i] == Symbol::kEoc) throw std::invalid_argument("decode_counter: early end");
    v = (v << 1) | (symbols[i] == Symbol::kOne ? 1u : 0u);
  }
  return v;
}

CounterDict::CounterDict(const CounterLayout& layout) : layout_(&layout) {
  if ((layout.alloc_bits + 63) / 64 > kMaxBlockWords)
    throw std::invalid_argument("CounterDict: layout exceeds the block word budget");
}

CounterDict::CounterDict(const CounterLayout& layout, const Block& block)
    : layout_(&layout), block_(block) {
  const std::uint32_t words = (layout.alloc_bits + 63) / 64;
  for (std::uint32_t k = 0; k < words; ++k) {
    count_ += static_cast<std::uint32_t>(std::popcount(eoc_mask(block_.w[k])));
    used_ += static_cast<std::uint32_t>(std::popcount(nonempty_mask(block_.w[k])));
  }
}

std::size_t CounterDict::select_eoc(std::uint32_t k) const {
  const std::uint32_t words = (layout_->alloc_bits + 63) / 64;
  for (std::uint32_t w = 0; w < words; ++w) {
    const std::uint64_t m = eoc_mask(block_.w[w]);
    const auto c = static_cast<std::uint32_t>(std::popcount(m));
    if (k < c) return (std::size_t{w} * 64 + bits::select64(m, k)) / 2;
    k -= c;
  }
  throw std::logic_error("CounterDict: missing end-of-counter symbol");
}

CounterDict::Span CounterDict::locate(std::uint32_t i) const {
  if (i >= count_) throw std::out_of_range("CounterDict: index out of range");
  const auto start = i == 0 ? 0u : static_cast<std::uint32_t>(select_eoc(i - 1)) + 1;
  return {start, static_cast<std::uint32_t>(select_eoc(i))};
}

std::uint64_t CounterDict::read(std::uint32_t i) const {
  const Span s = locate(i);
  std::uint64_t v = 0;
  for (std::uint32_t j = s.start; j < s.eoc; ++j) v = (v << 1) | (symbol(j) == Symbol::kOne ? 1u : 0u);
  return v;
}

bool CounterDict::fits(std::int64_t extra_weight, std::int64_t extra_symbols) const {
  const std::int64_t weight = static_cast<std::int64_t>(total_weight()) + extra_weight;
  const std::int64_t symbols = static_cast<std::int64_t>(used_) + extra_symbols;
  return weight <= layout_->weight_cap && symbols <= layout_->symbol_capacity();
}

bool CounterDict::can_absorb(std::uint32_t weight) const {
  return fits(weight, std::int64_t{weight} + 1);
}

void CounterDict::splice(std::uint32_t start, std::uint32_t old_len, std::uint64_t value) {
  const std::uint32_t new_len = value == 0 ? 0 : counter_weight(value) + 1;
  const std::uint32_t tail = used_ - (start + old_len);
  block_.move(2 * std::size_t{start + old_len}, 2 * std::size_t{start + new_len}, 2 * std::size_t{tail});
  if (new_len < old_len) block_.clear_range(2 * std::size_t{used_ - (old_len - new_len)}, 2 * std::size_t{old_len - new_len});
  if (value != 0) {
    const std::uint32_t digits = new_len - 1;
    for (std::uint32_t d = 0; d < digits; ++d) {
      const bool one = (value >> (digits - 1 - d)) & 1u;
      block_.set(2 * std::size_t{start + d}, 2, static_cast<std::uint64_t>(one ? Symbol::kOne : Symbol::kZero));
    }
    block_.set(2 * std::size_t{start + digits}, 2, static_cast<std::uint64_t>(Symbol::kEoc));
  }
  used_ = used_ - old_len + new_len;
}

CdStatus CounterDict::increment(std::uint32_t i) {
  const Span s = locate(i);
  const std::uint64_t c = read(i);
  if (c + 1 >= layout_->heavy_threshold) return CdStatus::kReachedHeavy;
  const std::int64_t grow = std::int64_t{counter_weight(c + 1)} - counter_weight(c);
  if (!fits(grow, grow)) return CdStatus::kWouldExceedCap;
  splice(s.start, s.eoc - s.start + 1, c + 1);
  return CdStatus::kOk;
}

CdStatus CounterDict::decrement(std::uint32_t i) {
  const Span s = locate(i);
  const std::uint64_t c = read(i);
  splice(s.start, s.eoc - s.start + 1, c - 1);
  if (c == 1) {
    --count_;
    return CdStatus::kReachedZero;
  }
  return CdStatus::kOk;
}

CdStatus CounterDict::insert_counter(std::uint32_t i, std::uint64_t c) {
  if (i > count_) throw std::out_of_range("CounterDict::insert_counter: index out of range");
  if (c < 1 || c >= layout_->heavy_threshold)
    throw std::out_of_range("CounterDict::insert_counter: value out of range");
  if (!can_absorb(counter_weight(c))) return CdStatus::kWouldExceedCap;
  const std::uint32_t start = i == count_ ? used_ : locate(i).start;
  splice(start, 0, c);
  ++count_;
  return CdStatus::kOk;
}

std::uint64_t CounterDict::remove_counter(std::uint32_t i) {
  const Span s = locate(i);
  const std::uint64_t c = read(i);
  splice(s.start, s.eoc - s.start + 1, 0);
  --count_;
  return c;
}

std::vector<std::uint64_t> CounterDict::values() const {
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  std::uint64_t v = 0;
  for (std::uint32_t j = 0; j < used_; ++j) {
    const Symbol s = symbol(j);
    if (s == Symbol::kEoc) {
      out.push_back(v);
      v = 0;
    } else {
      v = (v << 1) | (s == Symbol::kOne ? 1u : 0u);
    }
  }
  return out;
}

bool CounterDict::well_formed() const {
  // Every used symbol is nonzero and contiguous from 0; every counter is a
  // canonical (leading one) value below the heavy threshold.
  for (std::uint32_t j = 0; j < layout_->symbol_capacity(); ++j) {
    const auto raw = block_.get(2 * std::size_t{j}, 2);
    if ((j < used_) != (raw != 0)) return false;
  }
  if (used_ > 0 && symbol(used_ - 1) != Symbol::kEoc) return false;
  bool at_start = true;
  std::uint32_t weight = 0;
  for (std::uint32_t j = 0; j < used_; ++j) {
    const Symbol s = symbol(j);
    if (at_start && s != Symbol::kOne) return false;
    at_start = s == Symbol::kEoc;
    if (s != Symbol::kEoc) ++weight;
  }
  for (auto v : values())
    if (v < 1 || v >= layout_->heavy_threshold) return false;
  return weight == total_weight() && total_weight() <= layout_->weight_cap;
}

}  // namespace msdict
