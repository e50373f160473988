// Acceptance gate. Prints one PASS/FAIL line per criterion followed by the
// measured values; exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "msdict/counter_dict.hpp"
#include "msdict/harness/experiments.hpp"
#include "msdict/harness/workload.hpp"
#include "msdict/hashing.hpp"
#include "msdict/ms_dict.hpp"
#include "msdict/pocket_dict.hpp"

using namespace msdict;
using namespace msdict::harness;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& what) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::uint64_t> ten_seeds() {
  std::vector<std::uint64_t> s(10);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i + 1;
  return s;
}

WorkloadSpec mixed_workload(Mode mode) {
  WorkloadSpec s;
  s.mode = mode;
  s.dict.capacity_n = 1u << 16;
  s.dict.universe_bits = 24;
  s.op_count = 1000000;
  s.seeds = ten_seeds();
  s.mix = {0.45, 0.10, 0.45};
  s.timing = false;
  return s;
}

std::array<ProbeCounter, kOpKinds> observed_max;

void absorb(const std::array<ProbeCounter, kOpKinds>& m) {
  for (std::size_t k = 0; k < kOpKinds; ++k) {
    observed_max[k].words = std::max(observed_max[k].words, m[k].words);
    observed_max[k].slot_probes = std::max(observed_max[k].slot_probes, m[k].slot_probes);
    observed_max[k].queue_probes = std::max(observed_max[k].queue_probes, m[k].queue_probes);
    observed_max[k].relocations = std::max(observed_max[k].relocations, m[k].relocations);
  }
}

bool within(const ProbeCounter& got, const ProbeCounter& cap) {
  return got.words <= cap.words && got.slot_probes <= cap.slot_probes && got.queue_probes <= cap.queue_probes &&
         got.relocations <= cap.relocations;
}

std::string show(const ProbeCounter& p) {
  return "w" + std::to_string(p.words) + "/s" + std::to_string(p.slot_probes) + "/q" +
         std::to_string(p.queue_probes) + "/r" + std::to_string(p.relocations);
}

void oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = run_workload(mixed_workload(Mode::kDense));
  const double secs = seconds_since(t0);
  std::uint64_t mism = 0, viol = 0, overflow = 0;
  for (const auto& run : r.runs) {
    mism += run.mismatches;
    viol += run.placement_violations;
    overflow += run.overflow_events;
    absorb(run.probe_max);
  }
  verdict(1, mism == 0 && viol == 0 && overflow == 0 && secs <= 120,
          fmt("mismatches=%.0f placement_violations=%.0f overflow=%.0f seconds=%.1f (limit 120)", double(mism),
              double(viol), double(overflow), secs));
}

void sparse_equivalence() {
  WorkloadSpec s = mixed_workload(Mode::kSparse);
  s.dict.light_threshold_override = 7;
  const Report r = run_workload(s);
  std::uint64_t mism = 0, viol = 0, overflow = 0;
  for (const auto& run : r.runs) {
    mism += run.mismatches;
    viol += run.placement_violations;
    overflow += run.overflow_events;
  }
  verdict(2, mism == 0 && viol == 0 && overflow == 0,
          fmt("mismatches=%.0f residence_violations=%.0f overflow=%.0f", double(mism), double(viol),
              double(overflow)));
}

void filter_error() {
  FilterOptions o;
  o.n = 1u << 16;
  o.epsilon = 1.0 / 128;
  o.probes = 100000;
  o.trials = 10;
  const FilterStats s = filter_experiment(o);
  double worst = 0;
  std::uint64_t under = 0;
  bool ok = s.trials.size() == 10;
  for (const auto& t : s.trials) {
    worst = std::max(worst, t.overcount_fraction);
    under += t.undercounts;
    ok = ok && t.overcount_fraction <= s.threshold && !t.overflowed;
  }
  verdict(3, ok && under == 0,
          fmt("worst_overcount_fraction=%.6f threshold=%.6f undercounts=%.0f", worst, s.threshold, double(under)));
}

void counter_reroutes() {
  Claim2Options o;
  o.config.capacity_n = 1u << 20;
  o.config.universe_bits = 25;
  o.config.spare_slack = 2.0;
  o.trials = 10;
  const Claim2Stats s = claim2_experiment(o);
  absorb(s.ops.max);
  std::uint64_t mism = 0;
  for (const auto& t : s.trials) mism += t.mismatches;
  verdict(4,
          s.trials_within_budget() >= 9 && !s.any_overflow() && s.params.n_S == 394 && mism == 0,
          fmt("within_budget=%.0f/10 budget=%.2f max_cd_reroutes=%.0f n_S=%.0f", s.trials_within_budget(),
              s.budget, double(s.max_cd_reroutes()), double(s.params.n_S)) +
              (s.any_overflow() ? " overflow" : " no_overflow"));
}

void space_shape_and_probes() {
  std::vector<SpaceAudit> audits;
  for (std::uint32_t lg : {14u, 17u, 20u}) {
    DictConfig c;
    c.capacity_n = std::uint64_t{1} << lg;
    c.universe_bits = lg + 5;
    audits.push_back(space_audit(c, 1));
  }
  double lo = 1e300, hi = 0;
  std::string detail;
  bool clean = true;
  for (const auto& a : audits) {
    lo = std::min(lo, a.space.overhead_per_element);
    hi = std::max(hi, a.space.overhead_per_element);
    clean = clean && !a.overflowed && a.filled == a.config.capacity_n;
    detail += fmt(" n=2^%.0f:%.2f", std::log2(double(a.config.capacity_n)), a.space.overhead_per_element);
    absorb(a.ops.max);
  }
  const double spare_seed = audits.back().spare_and_seed_bits_per_element();
  verdict(5, clean && hi / lo <= 1.25 && spare_seed <= 1.0,
          fmt("overhead_ratio=%.4f spare_seed_bits_per_element@2^20=%.3f", hi / lo, spare_seed) +
              " overhead_bits_per_element" + detail);

  // A mixed workload at each size, so deletes and queries are measured too.
  std::vector<std::pair<int, std::array<ProbeCounter, kOpKinds>>> per_n_max;
  for (const auto& a : audits) {
    WorkloadSpec w = mixed_workload(Mode::kDense);
    w.dict = a.config;
    w.op_count = 400000;
    w.seeds = {1, 2};
    std::array<ProbeCounter, kOpKinds> m = a.ops.max;
    for (const auto& run : run_workload(w).runs) {
      clean = clean && run.ok();
      for (std::size_t k = 0; k < kOpKinds; ++k) {
        m[k].words = std::max(m[k].words, run.probe_max[k].words);
        m[k].slot_probes = std::max(m[k].slot_probes, run.probe_max[k].slot_probes);
        m[k].queue_probes = std::max(m[k].queue_probes, run.probe_max[k].queue_probes);
        m[k].relocations = std::max(m[k].relocations, run.probe_max[k].relocations);
      }
    }
    absorb(m);
    per_n_max.emplace_back(std::countr_zero(a.config.capacity_n), m);
  }

  // The ceilings depend only on block limits, L and Q; build them for each
  // n and require equality, then require every observed maximum under them.
  std::vector<std::array<ProbeCounter, kOpKinds>> ceilings;
  for (const auto& a : audits) {
    std::array<ProbeCounter, kOpKinds> c{};
    for (std::size_t k = 0; k < kOpKinds; ++k) c[k] = op_ceiling(static_cast<OpKind>(k), a.config);
    ceilings.push_back(c);
  }
  bool identical = true;
  for (const auto& c : ceilings)
    for (std::size_t k = 0; k < kOpKinds; ++k) identical = identical && c[k] == ceilings.front()[k];
  bool bounded = true;
  std::string log;
  for (std::size_t k = 0; k < kOpKinds; ++k) {
    bounded = bounded && within(observed_max[k], ceilings.front()[k]);
    log += std::string(" ") + to_string(static_cast<OpKind>(k)) + " max " + show(observed_max[k]) + " <= " +
           show(ceilings.front()[k]);
  }
  verdict(6, identical && bounded && clean, std::string(identical ? "ceilings identical across n" : "ceilings differ") + log);
  for (const auto& [lg, m] : per_n_max) {
    std::string line = "  n=2^" + std::to_string(lg) + " observed:";
    for (std::size_t k = 0; k < kOpKinds; ++k)
      line += std::string(" ") + to_string(static_cast<OpKind>(k)) + " " + show(m[k]);
    std::printf("%s\n", line.c_str());
  }
}

bool counter_round_trip() {
  const std::uint64_t limit = std::uint64_t{1} << 20;
  for (std::uint64_t c = 1; c < limit; ++c) {
    const auto enc = encode_counter(c, limit);
    // Independent check: symbols spell c in binary, most significant first.
    std::uint64_t v = 0;
    for (std::size_t i = 0; i + 1 < enc.size(); ++i) {
      if (enc[i] == Symbol::kEoc) return false;
      v = 2 * v + (enc[i] == Symbol::kOne ? 1 : 0);
    }
    if (enc.back() != Symbol::kEoc || enc.front() != Symbol::kOne || v != c || decode_counter(enc) != c)
      return false;
  }
  return true;
}

std::uint64_t pocket_fuzz() {
  const PocketLayout layout{2, 6, 13};
  std::uint64_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> key(0, layout.key_space() - 1);
    PocketDict pd(layout);
    std::vector<std::uint64_t> ref;
    for (int i = 0; i < 10000; ++i) {
      const std::uint64_t k = key(rng);
      const auto pos = std::lower_bound(ref.begin(), ref.end(), k);
      const bool present = pos != ref.end() && *pos == k;
      const auto ord = static_cast<std::uint32_t>(pos - ref.begin());
      switch (rng() % 3) {
        case 0: {
          const PdResult r = pd.insert(k);
          const PdStatus want =
              present ? PdStatus::kDuplicate : ref.size() == layout.capacity ? PdStatus::kFull : PdStatus::kOk;
          if (r.status != want || (want == PdStatus::kOk && r.ordinal != ord)) ++mismatches;
          if (want == PdStatus::kOk) ref.insert(pos, k);
          break;
        }
        case 1: {
          const PdResult r = pd.erase(k);
          if ((r.status == PdStatus::kOk) != present || (present && r.ordinal != ord)) ++mismatches;
          if (present) ref.erase(pos);
          break;
        }
        default: {
          const auto q = pd.query(k);
          if (q.has_value() != present || (present && *q != ord)) ++mismatches;
        }
      }
      if (pd.size() != ref.size()) ++mismatches;
    }
    if (pd.keys() != ref || !pd.well_formed()) ++mismatches;
  }
  return mismatches;
}

bool split_bijective() {
  for (std::uint32_t log_m : {0u, 6u, 11u, 16u}) {
    const QuotientSplitter s(16, log_m, FeistelPermutation(16, 77 + log_m, PermutationMode::kSeeded));
    std::vector<bool> hit(1u << 16, false);
    for (std::uint64_t x = 0; x < (1u << 16); ++x) {
      const std::uint64_t p = s.pack(s.split(x));
      if (p >= (1u << 16) || hit[p] || s.unsplit(s.split(x)) != x) return false;
      hit[p] = true;
    }
  }
  return true;
}

bool partition_bijective() {
  for (std::uint32_t parts : {1u, 4u, 64u}) {
    const FeistelPartitioner f(16, parts, 8, 5 + parts);
    const std::uint32_t rest = 16 - static_cast<std::uint32_t>(std::countr_zero(parts));
    std::vector<bool> hit(1u << 16, false);
    for (std::uint64_t x = 0; x < (1u << 16); ++x) {
      const PartAssignment a = f.partition(x);
      const std::uint64_t cell = (a.part << rest) | a.reduced_key;
      if (a.part >= parts || a.reduced_key >> rest || hit[cell] || f.recover(a) != x) return false;
      hit[cell] = true;
    }
  }
  return true;
}

void encodings() {
  const bool counters = counter_round_trip();
  const std::uint64_t pd = pocket_fuzz();
  const bool split = split_bijective();
  const bool part = partition_bijective();
  verdict(7, counters && pd == 0 && split && part,
          std::string("counter_round_trip=") + (counters ? "ok" : "bad") +
              " pocket_fuzz_mismatches=" + std::to_string(pd) + " split_bijective=" + (split ? "yes" : "no") +
              " partition_bijective=" + (part ? "yes" : "no"));
}

void balance() {
  BalanceOptions o;
  o.n = 1u << 18;
  o.parts = 64;
  o.trials = 10;
  const BalanceStats s = balance_experiment(o);
  verdict(8, s.trials.size() == 10 && s.trials_within(1.5) >= 9,
          fmt("within_1.5=%.0f/10 max_ratio=%.4f mean_part=%.0f", s.trials_within(1.5), s.max_ratio(),
              s.mean_part));
  for (const auto& t : s.trials)
    std::printf("  seed %llu: max_part=%llu ratio=%.4f%s\n", static_cast<unsigned long long>(t.seed),
                static_cast<unsigned long long>(t.max_part), t.ratio, t.flagged ? " flagged" : "");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> steps{oracle_equivalence, sparse_equivalence, filter_error, counter_reroutes,
                                                 space_shape_and_probes, encodings, balance};
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("error: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%s (%d failing)\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
