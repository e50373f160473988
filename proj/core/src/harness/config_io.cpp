#include "msdict/harness/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json_fields.hpp"

namespace msdict::harness {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw std::invalid_argument("unknown key '" + where + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& into, const std::string& where = {}) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("bad value for '" + where + key + "': " + e.what());
  }
}

void read_dict(const json& j, DictConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("'dict' must be an object");
  reject_unknown(j, {"seed", "delta_coeff", "spare_slack", "relocation_limit", "queue_capacity", "partition_count",
                     "feistel_independence", "permutation", "heavy_threshold", "light_threshold"},
                 "dict.");
  read(j, "seed", c.seed, "dict.");
  read(j, "delta_coeff", c.delta_coeff, "dict.");
  read(j, "spare_slack", c.spare_slack, "dict.");
  read(j, "relocation_limit", c.relocation_limit, "dict.");
  read(j, "queue_capacity", c.queue_capacity, "dict.");
  read(j, "partition_count", c.partition_count, "dict.");
  read(j, "feistel_independence", c.feistel_independence, "dict.");
  read(j, "heavy_threshold", c.heavy_threshold_override, "dict.");
  read(j, "light_threshold", c.light_threshold_override, "dict.");
  std::string perm = c.permutation == PermutationMode::kIdentity ? "identity" : "seeded";
  read(j, "permutation", perm, "dict.");
  if (perm == "identity") c.permutation = PermutationMode::kIdentity;
  else if (perm == "seeded") c.permutation = PermutationMode::kSeeded;
  else throw std::invalid_argument("bad value for 'dict.permutation': " + perm);
}

}  // namespace

namespace detail {

json workload_json(const WorkloadSpec& s) {
  const DictConfig& c = s.dict;
  return json{
      {"mode", to_string(s.mode)},
      {"n", c.capacity_n},
      {"universe_bits", c.universe_bits},
      {"epsilon", s.epsilon},
      {"generator", to_string(s.generator)},
      {"zipf_s", s.zipf_s},
      {"zipf_pool", s.zipf_pool},
      {"repeat_fraction", s.repeat_fraction},
      {"crafted_bins", s.crafted_bins},
      {"crafted_fraction", s.crafted_fraction},
      {"trace", s.trace_path},
      {"op_mix", {{"insert", s.mix.insert}, {"delete", s.mix.erase}, {"query", s.mix.query}}},
      {"op_count", s.op_count},
      {"seeds", s.seeds},
      {"report_path", s.report_path},
      {"audit_interval", s.audit_interval},
      {"timing", s.timing},
      {"dict",
       {{"seed", c.seed},
        {"delta_coeff", c.delta_coeff},
        {"spare_slack", c.spare_slack},
        {"relocation_limit", c.relocation_limit},
        {"queue_capacity", c.queue_capacity},
        {"partition_count", c.partition_count},
        {"feistel_independence", c.feistel_independence},
        {"permutation", c.permutation == PermutationMode::kIdentity ? "identity" : "seeded"},
        {"heavy_threshold", c.heavy_threshold_override},
        {"light_threshold", c.light_threshold_override}}},
  };
}

}  // namespace detail

WorkloadSpec parse_workload(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("workload config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("workload config must be a JSON object");
  reject_unknown(j, {"mode", "n", "universe_bits", "epsilon", "generator", "zipf_s", "zipf_pool", "repeat_fraction",
                     "crafted_bins", "crafted_fraction", "trace", "op_mix", "op_count", "seeds", "report_path",
                     "audit_interval", "timing", "dict"},
                 "");
  WorkloadSpec s;
  std::string mode = to_string(s.mode), generator = to_string(s.generator);
  read(j, "mode", mode);
  read(j, "generator", generator);
  s.mode = parse_mode(mode);
  s.generator = parse_generator(generator);
  read(j, "n", s.dict.capacity_n);
  read(j, "universe_bits", s.dict.universe_bits);
  read(j, "epsilon", s.epsilon);
  read(j, "zipf_s", s.zipf_s);
  read(j, "zipf_pool", s.zipf_pool);
  read(j, "repeat_fraction", s.repeat_fraction);
  read(j, "crafted_bins", s.crafted_bins);
  read(j, "crafted_fraction", s.crafted_fraction);
  read(j, "trace", s.trace_path);
  read(j, "op_count", s.op_count);
  read(j, "seeds", s.seeds);
  read(j, "report_path", s.report_path);
  read(j, "audit_interval", s.audit_interval);
  read(j, "timing", s.timing);
  if (j.contains("op_mix")) {
    const json& m = j["op_mix"];
    if (!m.is_object()) throw std::invalid_argument("'op_mix' must be an object");
    reject_unknown(m, {"insert", "delete", "query"}, "op_mix.");
    read(m, "insert", s.mix.insert, "op_mix.");
    read(m, "delete", s.mix.erase, "op_mix.");
    read(m, "query", s.mix.query, "op_mix.");
  }
  if (j.contains("dict")) read_dict(j["dict"], s.dict);
  validate(s);
  return s;
}

WorkloadSpec load_workload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_workload(text.str());
}

std::string workload_to_json(const WorkloadSpec& spec) { return detail::workload_json(spec).dump(2); }

}  // namespace msdict::harness
