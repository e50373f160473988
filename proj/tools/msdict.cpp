#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "msdict/harness/config_io.hpp"
#include "msdict/harness/experiments.hpp"
#include "msdict/harness/report.hpp"
#include "msdict/harness/workload.hpp"

namespace mh = msdict::harness;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::uint32_t default_universe_bits(std::uint64_t n) {
  return static_cast<std::uint32_t>(std::ceil(std::log2(static_cast<double>(n)))) + 5;
}

mh::OpMix parse_mix(const std::string& text) {
  std::vector<double> v;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 3) throw std::invalid_argument("--mix expects insert,delete,query");
  return {v[0], v[1], v[2]};
}

struct RunArgs {
  std::string config;
  std::uint64_t n = 0;
  std::uint32_t universe_bits = 0;
  std::string mode;
  double epsilon = 0;
  std::vector<std::uint64_t> seeds;
  std::uint64_t ops = 0;
  std::string generator;
  std::string trace;
  std::string mix;
  double zipf_s = 0;
  std::uint32_t partitions = 0;
  std::uint64_t heavy = 0;
  std::uint64_t light = 0;
  bool no_timing = false;
  std::string out;
};

int do_run(const RunArgs& a, const CLI::App& cmd) {
  mh::WorkloadSpec spec = a.config.empty() ? mh::WorkloadSpec{} : mh::load_workload(a.config);
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--n")) spec.dict.capacity_n = a.n;
  if (given("--universe-bits")) spec.dict.universe_bits = a.universe_bits;
  if (given("--mode")) spec.mode = mh::parse_mode(a.mode);
  if (given("--epsilon")) spec.epsilon = a.epsilon;
  if (given("--seed")) spec.seeds = a.seeds;
  if (given("--ops")) spec.op_count = a.ops;
  if (given("--generator")) spec.generator = mh::parse_generator(a.generator);
  if (given("--trace")) {
    spec.trace_path = a.trace;
    spec.generator = mh::GeneratorKind::kTraceFile;
  }
  if (given("--mix")) spec.mix = parse_mix(a.mix);
  if (given("--zipf-s")) spec.zipf_s = a.zipf_s;
  if (given("--partitions")) spec.dict.partition_count = a.partitions;
  if (given("--heavy-threshold")) spec.dict.heavy_threshold_override = a.heavy;
  if (given("--light-threshold")) spec.dict.light_threshold_override = a.light;
  if (a.no_timing) spec.timing = false;
  if (given("--out")) spec.report_path = a.out;

  const mh::Report report = mh::run_workload(spec);
  mh::write_output(spec.report_path, mh::to_json(report));
  for (const auto& r : report.runs) {
    if (r.ok()) continue;
    std::cerr << "seed " << r.seed << ": " << r.mismatches << " mismatches, " << r.placement_violations
              << " placement violations, " << r.overflow_events << " overflow events\n";
    if (!r.first_mismatch.empty()) std::cerr << "  " << r.first_mismatch << "\n";
    for (const auto& f : r.audit_findings) std::cerr << "  " << f << "\n";
  }
  return report.ok() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiset dictionary workload runner and experiments"};
  app.require_subcommand(1);

  RunArgs run;
  auto* cmd_run = app.add_subcommand("run", "Replay or generate a workload and check it against a reference multiset");
  cmd_run->add_option("--config", run.config, "JSON workload document; flags override its fields")->check(CLI::ExistingFile);
  cmd_run->add_option("--n", run.n, "Capacity (bound on total cardinality)");
  cmd_run->add_option("--universe-bits", run.universe_bits, "log2 of the universe size");
  cmd_run->add_option("--mode", run.mode, "dense, sparse or filter");
  cmd_run->add_option("--epsilon", run.epsilon, "Filter error rate");
  cmd_run->add_option("--seed", run.seeds, "One run per seed");
  cmd_run->add_option("--ops", run.ops, "Operations per seed");
  cmd_run->add_option("--generator", run.generator, "uniform, zipf, crafted-bin-collision or trace-file");
  cmd_run->add_option("--trace", run.trace, "Replay this trace (I/D/Q <hex> lines)")->check(CLI::ExistingFile);
  cmd_run->add_option("--mix", run.mix, "insert,delete,query proportions");
  cmd_run->add_option("--zipf-s", run.zipf_s, "Zipf exponent");
  cmd_run->add_option("--partitions", run.partitions, "Dense mode: number of parts (power of two)");
  cmd_run->add_option("--heavy-threshold", run.heavy, "Override T_heavy");
  cmd_run->add_option("--light-threshold", run.light, "Sparse mode: override T_light");
  cmd_run->add_flag("--no-timing", run.no_timing, "Omit wall-clock fields so reports diff cleanly");
  cmd_run->add_option("--out", run.out, "Report path (stdout when omitted)");

  std::uint64_t c2_n = 1u << 20;
  std::uint32_t c2_ub = 0, c2_trials = 10;
  std::uint64_t c2_seed = 1;
  std::string c2_law = "geometric", c2_out;
  auto* cmd_c2 = app.add_subcommand("claim2", "Count reroutes caused by full counter dictionaries");
  cmd_c2->add_option("--n", c2_n, "Multiset cardinality");
  cmd_c2->add_option("--universe-bits", c2_ub, "log2 u (default log2 n + 5)");
  cmd_c2->add_option("--trials", c2_trials);
  cmd_c2->add_option("--seed", c2_seed);
  cmd_c2->add_option("--multiplicity", c2_law, "geometric or one")->check(CLI::IsMember({"geometric", "one"}));
  cmd_c2->add_option("--out", c2_out);

  mh::BalanceOptions bal;
  std::string bal_out;
  auto* cmd_bal = app.add_subcommand("balance", "Part cardinalities under the Feistel partitioner");
  cmd_bal->add_option("--n", bal.n);
  cmd_bal->add_option("--universe-bits", bal.universe_bits, "log2 u (default log2 n + 5)");
  cmd_bal->add_option("--parts", bal.parts, "Power of two");
  cmd_bal->add_option("--trials", bal.trials);
  cmd_bal->add_option("--seed", bal.seed);
  cmd_bal->add_option("--independence", bal.independence, "Round function independence k'");
  cmd_bal->add_option("--out", bal_out);

  std::vector<std::uint64_t> sa_n{1u << 14, 1u << 17, 1u << 20};
  std::uint32_t sa_gap = 5;
  std::uint64_t sa_seed = 1;
  std::string sa_out;
  auto* cmd_sa = app.add_subcommand("space-audit", "Fill dictionaries to capacity and report their allocation");
  cmd_sa->add_option("--n", sa_n, "One audit per value");
  cmd_sa->add_option("--gap-bits", sa_gap, "log2(u / n)");
  cmd_sa->add_option("--seed", sa_seed);
  cmd_sa->add_option("--out", sa_out);

  mh::FilterOptions flt;
  std::string flt_out;
  auto* cmd_flt = app.add_subcommand("filter", "Counting filter overcount rate on fresh non-members");
  cmd_flt->add_option("--n", flt.n);
  cmd_flt->add_option("--universe-bits", flt.universe_bits);
  cmd_flt->add_option("--epsilon", flt.epsilon);
  cmd_flt->add_option("--probes", flt.probes);
  cmd_flt->add_option("--trials", flt.trials);
  cmd_flt->add_option("--seed", flt.seed);
  cmd_flt->add_option("--out", flt_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_run) return do_run(run, *cmd_run);

    if (*cmd_c2) {
      mh::Claim2Options o;
      o.config.capacity_n = c2_n;
      o.config.universe_bits = c2_ub != 0 ? c2_ub : default_universe_bits(c2_n);
      o.trials = c2_trials;
      o.seed = c2_seed;
      o.law = c2_law == "one" ? mh::MultiplicityLaw::kOne : mh::MultiplicityLaw::kGeometric;
      const auto stats = mh::claim2_experiment(o);
      mh::write_output(c2_out, mh::to_json(stats));
      bool bad = stats.any_overflow();
      for (const auto& t : stats.trials) bad = bad || t.mismatches != 0;
      return bad ? kExitFailure : 0;
    }

    if (*cmd_bal) {
      if (cmd_bal->count("--universe-bits") == 0) bal.universe_bits = default_universe_bits(bal.n);
      mh::write_output(bal_out, mh::to_json(mh::balance_experiment(bal)));
      return 0;
    }

    if (*cmd_sa) {
      std::vector<mh::SpaceAudit> audits;
      bool overflowed = false;
      for (std::uint64_t n : sa_n) {
        msdict::DictConfig c;
        c.capacity_n = n;
        c.universe_bits = static_cast<std::uint32_t>(std::ceil(std::log2(static_cast<double>(n)))) + sa_gap;
        audits.push_back(mh::space_audit(c, sa_seed));
        overflowed = overflowed || audits.back().overflowed;
      }
      mh::write_output(sa_out, mh::to_json(audits));
      return overflowed ? kExitFailure : 0;
    }

    if (*cmd_flt) {
      const auto stats = mh::filter_experiment(flt);
      mh::write_output(flt_out, mh::to_json(stats));
      for (const auto& t : stats.trials)
        if (t.undercounts != 0 || t.overflowed) return kExitFailure;
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "msdict: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "msdict: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
