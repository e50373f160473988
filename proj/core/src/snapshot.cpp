#include "msdict/snapshot.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace msdict {
namespace {

void put(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

void put_double(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw std::runtime_error("snapshot: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

std::uint32_t get32(std::istream& in) {
  const std::uint64_t v = get(in);
  if (v > 0xFFFFFFFFu) throw std::runtime_error("snapshot: field out of range");
  return static_cast<std::uint32_t>(v);
}

void put_words(std::ostream& out, std::span<const std::uint64_t> words) {
  put(out, words.size());
  for (auto w : words) put(out, w);
}

void get_words(std::istream& in, std::span<std::uint64_t> words) {
  if (get(in) != words.size()) throw std::runtime_error("snapshot: arena size mismatch");
  for (auto& w : words) w = get(in);
}

}  // namespace

void save_snapshot(const MsDict& d, std::ostream& out) {
  const DictConfig& c = d.config_;
  if (c.partition_count != 0) throw std::invalid_argument("snapshot: partitioned dictionaries are not supported");
  out.write(kSnapshotMagic, 8);
  put(out, kSnapshotVersion);

  put(out, c.capacity_n);
  put(out, c.universe_bits);
  put_double(out, c.delta_coeff);
  put_double(out, c.spare_slack);
  put(out, c.relocation_limit);
  put(out, c.queue_capacity);
  put(out, c.seed);
  put(out, c.partition_count);
  put(out, c.feistel_independence);
  put(out, static_cast<std::uint64_t>(c.permutation));
  put(out, c.heavy_threshold_override);
  put(out, c.light_threshold_override);

  put(out, d.cardinality_);
  put(out, d.op_count_);
  put(out, d.overflowed_ ? 1 : 0);

  put_words(out, d.bins_.raw().words());
  put_words(out, d.counters_.raw().words());

  put(out, d.spare_.options().slots_per_table);
  for (int t = 0; t < 2; ++t)
    for (const auto& e : d.spare_.table(t)) {
      put(out, e.key);
      put(out, e.count);
    }
  put(out, d.spare_.queue().size());
  for (const auto& p : d.spare_.queue()) {
    put(out, p.entry.key);
    put(out, p.entry.count);
    put(out, p.table);
  }
  if (!out) throw std::runtime_error("snapshot: write failed");
}

MsDict load_snapshot(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kSnapshotMagic, 8) != 0)
    throw std::runtime_error("snapshot: bad magic");
  if (get(in) != kSnapshotVersion) throw std::runtime_error("snapshot: unsupported version");

  DictConfig c;
  c.capacity_n = get(in);
  c.universe_bits = get32(in);
  c.delta_coeff = std::bit_cast<double>(get(in));
  c.spare_slack = std::bit_cast<double>(get(in));
  c.relocation_limit = get32(in);
  c.queue_capacity = get32(in);
  c.seed = get(in);
  c.partition_count = get32(in);
  c.feistel_independence = get32(in);
  const std::uint64_t mode = get(in);
  if (mode > 1) throw std::runtime_error("snapshot: unknown permutation mode");
  c.permutation = static_cast<PermutationMode>(mode);
  c.heavy_threshold_override = get(in);
  c.light_threshold_override = get(in);

  MsDict d = [&] {
    try {
      return MsDict(c);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("snapshot: invalid configuration: ") + e.what());
    }
  }();
  d.cardinality_ = get(in);
  d.op_count_ = get(in);
  d.overflowed_ = get(in) != 0;

  get_words(in, d.bins_.raw().words());
  get_words(in, d.counters_.raw().words());

  const std::uint64_t slots = get(in);
  if (slots != d.spare_.options().slots_per_table) throw std::runtime_error("snapshot: spare size mismatch");
  std::vector<SpareEntry> tables[2];
  for (auto& t : tables) {
    t.resize(slots);
    for (auto& e : t) {
      e.key = get(in);
      e.count = get(in);
    }
  }
  const std::uint64_t qlen = get(in);
  if (qlen > c.queue_capacity) throw std::runtime_error("snapshot: queue longer than its capacity");
  std::deque<Spare::Pending> queue;
  for (std::uint64_t i = 0; i < qlen; ++i) {
    Spare::Pending p;
    p.entry.key = get(in);
    p.entry.count = get(in);
    const std::uint64_t t = get(in);
    if (t > 1) throw std::runtime_error("snapshot: bad queue table index");
    p.table = static_cast<std::uint8_t>(t);
    queue.push_back(p);
  }
  d.spare_.restore(std::move(tables[0]), std::move(tables[1]), std::move(queue), d.overflowed_);
  return d;
}

}  // namespace msdict
