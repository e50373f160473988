#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "msdict/harness/oracle.hpp"
#include "msdict/hashing.hpp"
#include "msdict/ms_dict.hpp"
#include "msdict/params.hpp"

namespace msdict::harness {

enum class Mode : std::uint8_t { kDense, kSparse, kFilter };
enum class GeneratorKind : std::uint8_t { kUniform, kZipf, kCraftedBinCollision, kTraceFile };

const char* to_string(Mode m);
const char* to_string(GeneratorKind g);
Mode parse_mode(const std::string& s);
GeneratorKind parse_generator(const std::string& s);

struct OpMix {
  double insert = 0.45;
  double erase = 0.10;
  double query = 0.45;
};

struct WorkloadSpec {
  Mode mode = Mode::kDense;
  // capacity_n and universe_bits are the workload's n and log2 u. The
  // structure seed for each run is mixed from dict.seed and the run seed.
  DictConfig dict;
  double epsilon = 1.0 / 128;

  GeneratorKind generator = GeneratorKind::kUniform;
  double zipf_s = 1.0;
  std::uint64_t zipf_pool = 1u << 16;  // distinct ranks
  // Uniform generator: chance that an insert re-targets a present element.
  double repeat_fraction = 0.5;
  std::uint32_t crafted_bins = 2;     // hot bins of the collision generator
  double crafted_fraction = 0.5;      // share of inserts aimed at hot bins
  std::string trace_path;

  OpMix mix;
  std::uint64_t op_count = 100000;
  std::vector<std::uint64_t> seeds{1};
  std::string report_path;

  // Full structural audit every this many ops (0: only at the end).
  std::uint64_t audit_interval = 100000;
  // Wall-clock fields make reports differ between runs; off for diffing.
  bool timing = true;
};

// Throws std::invalid_argument on inconsistent specs.
void validate(const WorkloadSpec& spec);

struct TraceOp {
  OpKind kind = OpKind::kCount;
  std::uint64_t x = 0;
  friend bool operator==(const TraceOp&, const TraceOp&) = default;
};

// "I <hex>", "D <hex>", "Q <hex>" per line; blank lines and lines starting
// with '#' are skipped. Throws std::runtime_error with the line number on
// malformed input.
std::vector<TraceOp> read_trace(std::istream& in);
std::vector<TraceOp> read_trace_file(const std::string& path);
void write_trace(std::ostream& out, const std::vector<TraceOp>& ops);

// Draws operations for a synthetic generator. Inserts turn into deletes
// once the oracle holds n elements and deletes turn into inserts when it
// is empty, so every scheduled delete targets a present element.
class OpGenerator {
 public:
  OpGenerator(const WorkloadSpec& spec, std::uint64_t seed);
  TraceOp next(const ReferenceMultiset& oracle);

 private:
  std::uint64_t fresh_element();
  std::uint64_t insert_target(const ReferenceMultiset& oracle);

  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  std::uint64_t universe_mask_;
  std::discrete_distribution<std::uint64_t> op_pick_;
  std::discrete_distribution<std::uint64_t> zipf_;
  FeistelPermutation zipf_ranks_;
  std::vector<std::uint64_t> hot_bins_;
  std::uint32_t remainder_bits_ = 0;
  std::uint32_t hot_keys_per_bin_ = 0;
};

struct SeedReport {
  std::uint64_t seed = 0;
  std::uint64_t ops_executed = 0;
  std::array<std::uint64_t, kOpKinds> ops_by_kind{};
  std::uint64_t final_cardinality = 0;

  std::uint64_t mismatches = 0;  // count disagreements and one-sided violations
  std::string first_mismatch;
  std::uint64_t placement_violations = 0;
  std::vector<std::string> audit_findings;  // first few, for the diff

  std::uint64_t overcounts = 0;  // filter mode: count above the truth
  std::uint64_t queries = 0;

  std::uint64_t overflow_events = 0;
  std::uint64_t spare_distinct_max = 0;
  std::uint64_t heavy_reroutes = 0;
  std::uint64_t full_bd_reroutes = 0;
  std::uint64_t full_cd_reroutes = 0;
  std::uint64_t reclaims = 0;
  std::array<ProbeCounter, kOpKinds> probe_max{};
  std::array<std::uint32_t, kOpKinds> dict_ops_max{};  // sparse mode

  SpaceReport space;

  double seconds = 0;
  double ops_per_second = 0;

  bool ok() const { return mismatches == 0 && placement_violations == 0 && overflow_events == 0; }
};

struct Report {
  static constexpr int kSchemaVersion = 1;
  std::string command = "run";
  WorkloadSpec spec;
  std::vector<SeedReport> runs;

  bool ok() const;
};

// Executes the workload once per seed against the structure selected by
// spec.mode and a ReferenceMultiset. A divergence stops that seed's run and
// is recorded with a description of the op.
Report run_workload(const WorkloadSpec& spec);

}  // namespace msdict::harness
