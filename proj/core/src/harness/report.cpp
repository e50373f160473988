#include "msdict/harness/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "json_fields.hpp"

namespace msdict::harness {

using nlohmann::json;

namespace {

void require_finite(const json& j, const std::string& path = "") {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw std::domain_error("report field " + path + " is not finite");
  if (j.is_structured())
    for (const auto& [key, value] : j.items()) require_finite(value, path + "/" + key);
}

std::string finish(json j) {
  j["schema_version"] = kReportSchemaVersion;
  require_finite(j);
  return j.dump(2) + "\n";
}

json probes_json(const ProbeCounter& p) {
  return {{"words", p.words}, {"slot_probes", p.slot_probes}, {"queue_probes", p.queue_probes},
          {"relocations", p.relocations}};
}

json probe_maxima(const std::array<ProbeCounter, kOpKinds>& m) {
  json j = json::object();
  for (std::size_t k = 0; k < kOpKinds; ++k) j[to_string(static_cast<OpKind>(k))] = probes_json(m[k]);
  return j;
}

json space_json(const SpaceReport& s) {
  return {{"bins_bits", s.bins_bits},         {"counters_bits", s.counters_bits},
          {"spare_bits", s.spare_bits},       {"seed_bits", s.seed_bits},
          {"total_bits", s.total_bits},       {"baseline_bits", s.baseline_bits},
          {"overhead_per_element", s.overhead_per_element}};
}

json params_json(const DerivedParams& p) {
  return {{"B", p.B},
          {"bin_occupancy", p.bin_occupancy},
          {"delta", p.delta},
          {"m", p.m},
          {"n_B", p.n_B},
          {"cd_weight_cap", p.cd_weight_cap},
          {"cd_alloc_bits", p.cd_alloc_bits},
          {"T_heavy", p.T_heavy},
          {"n_S", p.n_S},
          {"remainder_bits", p.remainder_bits},
          {"pd_block_words", p.pd_block_words},
          {"spare_slots", p.spare_slots}};
}

json ops_json(const OpStats& s) {
  json ops = json::object();
  for (std::size_t k = 0; k < kOpKinds; ++k) ops[to_string(static_cast<OpKind>(k))] = s.ops[k];
  return {{"ops", ops},
          {"probe_max", probe_maxima(s.max)},
          {"heavy_reroutes", s.heavy_reroutes},
          {"full_bd_reroutes", s.full_bd_reroutes},
          {"full_cd_reroutes", s.full_cd_reroutes},
          {"reclaims", s.reclaims},
          {"spare_distinct_max", s.spare_distinct_max},
          {"overflow_events", s.overflow_events}};
}

json seed_json(const SeedReport& r, bool timing) {
  json ops = json::object();
  json dict_ops = json::object();
  for (std::size_t k = 0; k < kOpKinds; ++k) {
    ops[to_string(static_cast<OpKind>(k))] = r.ops_by_kind[k];
    dict_ops[to_string(static_cast<OpKind>(k))] = r.dict_ops_max[k];
  }
  json j = {{"seed", r.seed},
            {"ok", r.ok()},
            {"ops_executed", r.ops_executed},
            {"ops", ops},
            {"final_cardinality", r.final_cardinality},
            {"mismatches", r.mismatches},
            {"first_mismatch", r.first_mismatch},
            {"placement_violations", r.placement_violations},
            {"audit_findings", r.audit_findings},
            {"queries", r.queries},
            {"overcounts", r.overcounts},
            {"overflow_events", r.overflow_events},
            {"spare_distinct_max", r.spare_distinct_max},
            {"heavy_reroutes", r.heavy_reroutes},
            {"full_bd_reroutes", r.full_bd_reroutes},
            {"full_cd_reroutes", r.full_cd_reroutes},
            {"reclaims", r.reclaims},
            {"probe_max", probe_maxima(r.probe_max)},
            {"dict_ops_max", dict_ops},
            {"space", space_json(r.space)}};
  if (timing) {
    j["seconds"] = r.seconds;
    j["ops_per_second"] = r.ops_per_second;
  }
  return j;
}

}  // namespace

std::string to_json(const Report& report) {
  json runs = json::array();
  for (const auto& r : report.runs) runs.push_back(seed_json(r, report.spec.timing));
  return finish({{"command", report.command},
                 {"ok", report.ok()},
                 {"spec", detail::workload_json(report.spec)},
                 {"runs", runs}});
}

std::string to_json(const Claim2Stats& s) {
  json trials = json::array();
  for (const auto& t : s.trials)
    trials.push_back({{"seed", t.seed},
                      {"distinct", t.distinct},
                      {"inserted", t.inserted},
                      {"full_cd_reroutes", t.full_cd_reroutes},
                      {"full_bd_reroutes", t.full_bd_reroutes},
                      {"heavy_reroutes", t.heavy_reroutes},
                      {"spare_distinct_max", t.spare_distinct_max},
                      {"overflowed", t.overflowed},
                      {"mismatches", t.mismatches}});
  return finish({{"command", "claim2"},
                 {"n", s.n},
                 {"universe_bits", s.universe_bits},
                 {"params", params_json(s.params)},
                 {"bound", s.bound},
                 {"budget", s.budget},
                 {"mean_cd_reroutes", s.mean_cd_reroutes()},
                 {"max_cd_reroutes", s.max_cd_reroutes()},
                 {"trials_within_budget", s.trials_within_budget()},
                 {"any_overflow", s.any_overflow()},
                 {"ops", ops_json(s.ops)},
                 {"trials", trials}});
}

std::string to_json(const BalanceStats& s) {
  json trials = json::array();
  for (const auto& t : s.trials)
    trials.push_back({{"seed", t.seed},
                      {"max_part", t.max_part},
                      {"min_part", t.min_part},
                      {"max_part_distinct", t.max_part_distinct},
                      {"ratio", t.ratio},
                      {"flagged", t.flagged}});
  return finish({{"command", "balance"},
                 {"n", s.n},
                 {"parts", s.parts},
                 {"mean_part", s.mean_part},
                 {"max_multiplicity", s.max_multiplicity},
                 {"max_ratio", s.max_ratio()},
                 {"trials", trials}});
}

std::string to_json(const std::vector<SpaceAudit>& audits) {
  json rows = json::array();
  for (const auto& a : audits)
    rows.push_back({{"n", a.config.capacity_n},
                    {"universe_bits", a.config.universe_bits},
                    {"params", params_json(a.params)},
                    {"filled", a.filled},
                    {"overflowed", a.overflowed},
                    {"space", space_json(a.space)},
                    {"spare_and_seed_bits_per_element", a.spare_and_seed_bits_per_element()},
                    {"ops", ops_json(a.ops)}});
  return finish({{"command", "space-audit"}, {"audits", rows}});
}

std::string to_json(const FilterStats& s) {
  json trials = json::array();
  for (const auto& t : s.trials)
    trials.push_back({{"seed", t.seed},
                      {"range_bits", t.range_bits},
                      {"probes", t.probes},
                      {"overcounts", t.overcounts},
                      {"undercounts", t.undercounts},
                      {"overcount_fraction", t.overcount_fraction},
                      {"overflowed", t.overflowed}});
  return finish({{"command", "filter"},
                 {"n", s.options.n},
                 {"universe_bits", s.options.universe_bits},
                 {"epsilon", s.options.epsilon},
                 {"threshold", s.threshold},
                 {"trials", trials}});
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace msdict::harness
