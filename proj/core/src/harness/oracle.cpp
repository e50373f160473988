#include "msdict/harness/oracle.hpp"

#include <stdexcept>

namespace msdict::harness {

void ReferenceMultiset::insert(std::uint64_t x) {
  auto [it, fresh] = slots_.try_emplace(x);
  if (fresh) {
    it->second.index = present_.size();
    present_.push_back(x);
  }
  ++it->second.count;
  ++cardinality_;
}

bool ReferenceMultiset::erase(std::uint64_t x) {
  auto it = slots_.find(x);
  if (it == slots_.end()) return false;
  --cardinality_;
  if (--it->second.count > 0) return true;
  const std::size_t hole = it->second.index;
  const std::uint64_t last = present_.back();
  present_[hole] = last;
  slots_[last].index = hole;
  present_.pop_back();
  slots_.erase(x);
  return true;
}

std::uint64_t ReferenceMultiset::count(std::uint64_t x) const {
  auto it = slots_.find(x);
  return it == slots_.end() ? 0 : it->second.count;
}

std::uint64_t ReferenceMultiset::sample(std::mt19937_64& rng) const {
  if (present_.empty()) throw std::logic_error("ReferenceMultiset::sample on an empty multiset");
  std::uniform_int_distribution<std::size_t> pick(0, present_.size() - 1);
  return present_[pick(rng)];
}

}  // namespace msdict::harness
