#include "msdict/harness/workload.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "msdict/counting_filter.hpp"
#include "msdict/hashing.hpp"
#include "msdict/sparse_dict.hpp"

namespace msdict::harness {

namespace {

constexpr std::size_t kMaxAuditFindings = 8;

std::string hex(std::uint64_t x) {
  std::ostringstream s;
  s << "0x" << std::hex << x;
  return s.str();
}

char op_letter(OpKind k) {
  switch (k) {
    case OpKind::kInsert: return 'I';
    case OpKind::kErase: return 'D';
    case OpKind::kCount: return 'Q';
  }
  return '?';
}

// Uniform view over the three structure kinds.
class Structure {
 public:
  virtual ~Structure() = default;
  virtual Status insert(std::uint64_t x) = 0;
  virtual Status erase(std::uint64_t x) = 0;
  virtual std::uint64_t count(std::uint64_t x) const = 0;
  // Exclusivity check for the element just touched; empty when fine.
  virtual std::string check_placement(std::uint64_t) const { return {}; }
  virtual std::vector<std::string> audit() const { return {}; }
  virtual void fill(SeedReport& r) const = 0;
  virtual bool exact() const { return true; }
};

void fill_from_stats(SeedReport& r, const OpStats& s) {
  r.overflow_events = std::max(r.overflow_events, s.overflow_events);
  r.spare_distinct_max = s.spare_distinct_max;
  r.heavy_reroutes = s.heavy_reroutes;
  r.full_bd_reroutes = s.full_bd_reroutes;
  r.full_cd_reroutes = s.full_cd_reroutes;
  r.reclaims = s.reclaims;
  r.probe_max = s.max;
}

class DenseStructure final : public Structure {
 public:
  explicit DenseStructure(const DictConfig& c) : d_(c) {}
  Status insert(std::uint64_t x) override { return d_.insert(x); }
  Status erase(std::uint64_t x) override { return d_.erase(x); }
  std::uint64_t count(std::uint64_t x) const override { return d_.count(x); }
  std::vector<std::string> audit() const override { return d_.audit(); }
  void fill(SeedReport& r) const override {
    fill_from_stats(r, d_.stats());
    r.space = d_.space_report();
  }

 private:
  MsDict d_;
};

class PartitionedStructure final : public Structure {
 public:
  explicit PartitionedStructure(const DictConfig& c) : d_(c) {}
  Status insert(std::uint64_t x) override { return d_.insert(x); }
  Status erase(std::uint64_t x) override { return d_.erase(x); }
  std::uint64_t count(std::uint64_t x) const override { return d_.count(x); }
  std::vector<std::string> audit() const override { return d_.audit(); }
  void fill(SeedReport& r) const override {
    fill_from_stats(r, d_.stats());
    r.space = d_.space_report();
  }

 private:
  PartitionedMsDict d_;
};

class SparseStructure final : public Structure {
 public:
  explicit SparseStructure(const DictConfig& c) : d_(c) {}
  Status insert(std::uint64_t x) override { return d_.insert(x); }
  Status erase(std::uint64_t x) override { return d_.erase(x); }
  std::uint64_t count(std::uint64_t x) const override { return d_.count(x); }
  std::string check_placement(std::uint64_t x) const override {
    if (d_.light().contains(x) && d_.heavy().contains(x)) return hex(x) + " resident in both satellite dictionaries";
    return {};
  }
  void fill(SeedReport& r) const override {
    r.dict_ops_max = d_.max_dict_ops();
    r.space.spare_bits = d_.light().allocated_bits() + d_.heavy().allocated_bits();
    r.space.total_bits = r.space.spare_bits;
    if (d_.light().overflowed() || d_.heavy().overflowed()) r.overflow_events = std::max<std::uint64_t>(r.overflow_events, 1);
  }

 private:
  SparseMsDict d_;
};

class FilterStructure final : public Structure {
 public:
  FilterStructure(const DictConfig& c, double eps) : f_(c, eps) {}
  Status insert(std::uint64_t x) override { return f_.insert(x); }
  Status erase(std::uint64_t x) override { return f_.erase(x); }
  std::uint64_t count(std::uint64_t x) const override { return f_.count(x); }
  std::vector<std::string> audit() const override { return f_.inner().audit(); }
  void fill(SeedReport& r) const override {
    fill_from_stats(r, f_.inner().stats());
    r.space = f_.inner().space_report();
  }
  bool exact() const override { return false; }

 private:
  CountingFilter f_;
};

std::unique_ptr<Structure> make_structure(const WorkloadSpec& spec, const DictConfig& c) {
  switch (spec.mode) {
    case Mode::kDense:
      if (c.partition_count > 0) return std::make_unique<PartitionedStructure>(c);
      return std::make_unique<DenseStructure>(c);
    case Mode::kSparse: return std::make_unique<SparseStructure>(c);
    case Mode::kFilter: return std::make_unique<FilterStructure>(c, spec.epsilon);
  }
  throw std::invalid_argument("unknown mode");
}

DictConfig run_config(const WorkloadSpec& spec, std::uint64_t seed) {
  DictConfig c = spec.dict;
  c.seed = mix_seed(spec.dict.seed, seed);
  if (spec.generator == GeneratorKind::kCraftedBinCollision) c.permutation = PermutationMode::kIdentity;
  return c;
}

class Runner {
 public:
  Runner(const WorkloadSpec& spec, SeedReport& r, Structure& s) : spec_(spec), r_(r), s_(s) {}

  // False once the run must stop.
  bool apply(const TraceOp& op) {
    ++r_.ops_executed;
    ++r_.ops_by_kind[static_cast<std::size_t>(op.kind)];
    const auto where = [&] {
      return "op " + std::to_string(r_.ops_executed) + " (" + op_letter(op.kind) + " " + hex(op.x) + ")";
    };
    switch (op.kind) {
      case OpKind::kInsert: {
        const Status st = s_.insert(op.x);
        if (st == Status::kOverflow) return overflow(where() + ": spare overflow");
        if (st != Status::kOk) return diverge(where() + ": insert returned " + to_string(st));
        oracle_.insert(op.x);
        break;
      }
      case OpKind::kErase: {
        const bool present = oracle_.count(op.x) > 0;
        // A filter cannot refuse deletes of absent elements; skip them.
        if (!present && !s_.exact()) return true;
        const Status st = s_.erase(op.x);
        if (st == Status::kOverflow) return overflow(where() + ": structure frozen after overflow");
        if ((st == Status::kOk) != present)
          return diverge(where() + ": delete returned " + to_string(st) + ", oracle holds " + std::to_string(oracle_.count(op.x)));
        oracle_.erase(op.x);
        break;
      }
      case OpKind::kCount: {
        ++r_.queries;
        if (!check_count(op.x, where)) return false;
        break;
      }
    }
    if (const std::string p = s_.check_placement(op.x); !p.empty()) {
      ++r_.placement_violations;
      return diverge(where() + ": " + p);
    }
    if (spec_.audit_interval > 0 && r_.ops_executed % spec_.audit_interval == 0) return audit(where());
    return true;
  }

  bool finish() {
    if (!audit("end of run")) return false;
    for (std::uint64_t x : oracle_.elements())
      if (!check_count(x, [x] { return "final sweep, " + hex(x); })) return false;
    r_.final_cardinality = oracle_.cardinality();
    return true;
  }

  const ReferenceMultiset& oracle() const { return oracle_; }

 private:
  template <class Where>
  bool check_count(std::uint64_t x, const Where& where) {
    const std::uint64_t got = s_.count(x);
    const std::uint64_t want = oracle_.count(x);
    if (got == want) return true;
    if (!s_.exact() && got > want) {
      ++r_.overcounts;
      return true;
    }
    return diverge(where() + ": structure count " + std::to_string(got) + ", oracle " + std::to_string(want));
  }

  bool audit(const std::string& where) {
    auto findings = s_.audit();
    if (findings.empty()) return true;
    r_.placement_violations += findings.size();
    for (std::size_t i = 0; i < findings.size() && r_.audit_findings.size() < kMaxAuditFindings; ++i)
      r_.audit_findings.push_back(where + ": " + findings[i]);
    return false;
  }

  bool diverge(const std::string& what) {
    ++r_.mismatches;
    if (r_.first_mismatch.empty()) r_.first_mismatch = what;
    return false;
  }

  // Overflow is the structure's documented failure mode, not a wrong answer.
  bool overflow(const std::string& what) {
    ++r_.overflow_events;
    if (r_.first_mismatch.empty()) r_.first_mismatch = what;
    return false;
  }

  const WorkloadSpec& spec_;
  SeedReport& r_;
  Structure& s_;
  ReferenceMultiset oracle_;
};

SeedReport run_one(const WorkloadSpec& spec, std::uint64_t seed, const std::vector<TraceOp>* trace) {
  SeedReport r;
  r.seed = seed;
  auto structure = make_structure(spec, run_config(spec, seed));
  Runner runner(spec, r, *structure);

  const auto start = std::chrono::steady_clock::now();
  bool alive = true;
  if (trace != nullptr) {
    for (const TraceOp& op : *trace)
      if (!(alive = runner.apply(op))) break;
  } else {
    OpGenerator gen(spec, seed);
    for (std::uint64_t i = 0; i < spec.op_count && alive; ++i) alive = runner.apply(gen.next(runner.oracle()));
  }
  if (alive) runner.finish();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  structure->fill(r);
  if (r.final_cardinality == 0) r.final_cardinality = runner.oracle().cardinality();
  if (spec.timing) {
    r.seconds = secs;
    r.ops_per_second = secs > 0 ? static_cast<double>(r.ops_executed) / secs : 0;
  }
  return r;
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::kDense: return "dense";
    case Mode::kSparse: return "sparse";
    case Mode::kFilter: return "filter";
  }
  return "?";
}

const char* to_string(GeneratorKind g) {
  switch (g) {
    case GeneratorKind::kUniform: return "uniform";
    case GeneratorKind::kZipf: return "zipf";
    case GeneratorKind::kCraftedBinCollision: return "crafted-bin-collision";
    case GeneratorKind::kTraceFile: return "trace-file";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::kDense, Mode::kSparse, Mode::kFilter})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

GeneratorKind parse_generator(const std::string& s) {
  for (GeneratorKind g : {GeneratorKind::kUniform, GeneratorKind::kZipf, GeneratorKind::kCraftedBinCollision,
                          GeneratorKind::kTraceFile})
    if (s == to_string(g)) return g;
  throw std::invalid_argument("unknown generator '" + s + "'");
}

void validate(const WorkloadSpec& spec) {
  validate(spec.dict);
  const OpMix& m = spec.mix;
  if (m.insert < 0 || m.erase < 0 || m.query < 0 || std::abs(m.insert + m.erase + m.query - 1.0) > 1e-9)
    throw std::invalid_argument("op mix proportions must be non-negative and sum to 1");
  if (spec.seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (spec.generator == GeneratorKind::kTraceFile && spec.trace_path.empty())
    throw std::invalid_argument("trace-file generator needs a trace path");
  if (spec.generator == GeneratorKind::kZipf &&
      (spec.zipf_s <= 0 || spec.zipf_pool == 0 || spec.zipf_pool - 1 > bits::low_mask(spec.dict.universe_bits)))
    throw std::invalid_argument("zipf generator needs s > 0 and a pool within the universe");
  if (spec.repeat_fraction < 0 || spec.repeat_fraction > 1) throw std::invalid_argument("repeat_fraction must lie in [0, 1]");
  if (spec.crafted_fraction < 0 || spec.crafted_fraction > 1) throw std::invalid_argument("crafted_fraction must lie in [0, 1]");
  if (spec.generator == GeneratorKind::kCraftedBinCollision && spec.crafted_bins == 0)
    throw std::invalid_argument("crafted generator needs at least one hot bin");
  if (spec.mode == Mode::kFilter && !(spec.epsilon > 0 && spec.epsilon < 1))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
}

bool Report::ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const SeedReport& r) { return r.ok(); });
}

std::vector<TraceOp> read_trace(std::istream& in) {
  std::vector<TraceOp> ops;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream s(line.substr(first));
    char letter = 0;
    std::string value;
    std::string extra;
    s >> letter >> value;
    TraceOp op;
    switch (letter) {
      case 'I': op.kind = OpKind::kInsert; break;
      case 'D': op.kind = OpKind::kErase; break;
      case 'Q': op.kind = OpKind::kCount; break;
      default: throw std::runtime_error("trace line " + std::to_string(lineno) + ": expected I, D or Q");
    }
    std::size_t used = 0;
    try {
      op.x = std::stoull(value, &used, 16);
    } catch (const std::exception&) {
      used = 0;
    }
    if (value.empty() || used != value.size() || (s >> extra))
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": malformed element '" + value + "'");
    ops.push_back(op);
  }
  return ops;
}

std::vector<TraceOp> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  return read_trace(in);
}

void write_trace(std::ostream& out, const std::vector<TraceOp>& ops) {
  for (const TraceOp& op : ops) out << op_letter(op.kind) << ' ' << std::hex << op.x << std::dec << '\n';
}

OpGenerator::OpGenerator(const WorkloadSpec& spec, std::uint64_t seed)
    : spec_(spec),
      rng_(mix_seed(seed, 0x9e4)),
      universe_mask_(bits::low_mask(spec.dict.universe_bits)),
      op_pick_({spec.mix.insert, spec.mix.erase, spec.mix.query}) {
  if (spec_.generator == GeneratorKind::kZipf) {
    std::vector<double> w(spec_.zipf_pool);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), spec_.zipf_s);
    zipf_ = std::discrete_distribution<std::uint64_t>(w.begin(), w.end());
    zipf_ranks_ = FeistelPermutation(spec_.dict.universe_bits, mix_seed(seed, 0x21f), PermutationMode::kSeeded);
  }
  if (spec_.generator == GeneratorKind::kCraftedBinCollision) {
    const DerivedParams p = derive(spec_.dict);
    remainder_bits_ = p.remainder_bits;
    hot_keys_per_bin_ = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(2 * std::uint64_t{p.n_B}, std::uint64_t{1} << p.remainder_bits));
    for (std::uint32_t i = 0; i < spec_.crafted_bins; ++i) hot_bins_.push_back((p.m / spec_.crafted_bins) * i);
  }
}

std::uint64_t OpGenerator::fresh_element() { return rng_() & universe_mask_; }

std::uint64_t OpGenerator::insert_target(const ReferenceMultiset& oracle) {
  switch (spec_.generator) {
    case GeneratorKind::kZipf: {
      // Ranks map to elements through a fixed seeded bijection.
      return zipf_ranks_.forward(zipf_(rng_));
    }
    case GeneratorKind::kCraftedBinCollision: {
      if (std::bernoulli_distribution(spec_.crafted_fraction)(rng_)) {
        std::uniform_int_distribution<std::size_t> bin(0, hot_bins_.size() - 1);
        std::uniform_int_distribution<std::uint64_t> rem(0, hot_keys_per_bin_ - 1);
        const std::uint64_t base = hot_bins_[bin(rng_)] << remainder_bits_;
        // Prefer a remainder the bin does not hold yet, so distinct keys
        // pile up in the bin instead of growing a few counters.
        const std::uint64_t start = rem(rng_);
        for (std::uint64_t i = 0; i < hot_keys_per_bin_; ++i) {
          const std::uint64_t x = base | ((start + i) % hot_keys_per_bin_);
          if (oracle.count(x) == 0) return x;
        }
        return base | start;
      }
      return fresh_element();
    }
    default:
      if (!oracle.empty() && std::bernoulli_distribution(spec_.repeat_fraction)(rng_)) return oracle.sample(rng_);
      return fresh_element();
  }
}

TraceOp OpGenerator::next(const ReferenceMultiset& oracle) {
  auto kind = static_cast<OpKind>(op_pick_(rng_));
  if (kind == OpKind::kInsert && oracle.cardinality() >= spec_.dict.capacity_n) kind = OpKind::kErase;
  if (kind == OpKind::kErase && oracle.empty()) kind = OpKind::kInsert;
  switch (kind) {
    case OpKind::kInsert: return {kind, insert_target(oracle)};
    case OpKind::kErase: return {kind, oracle.sample(rng_)};
    case OpKind::kCount: {
      // Half the queries hit present elements, half draw fresh ones.
      const bool hit = !oracle.empty() && std::bernoulli_distribution(0.5)(rng_);
      return {kind, hit ? oracle.sample(rng_) : fresh_element()};
    }
  }
  return {};
}

Report run_workload(const WorkloadSpec& spec) {
  validate(spec);
  Report report;
  report.spec = spec;
  std::vector<TraceOp> trace;
  const bool replay = spec.generator == GeneratorKind::kTraceFile;
  if (replay) trace = read_trace_file(spec.trace_path);
  for (std::uint64_t seed : spec.seeds) report.runs.push_back(run_one(spec, seed, replay ? &trace : nullptr));
  return report;
}

}  // namespace msdict::harness
