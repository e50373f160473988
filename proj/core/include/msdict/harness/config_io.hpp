#pragma once

#include <string>

#include "msdict/harness/workload.hpp"

namespace msdict::harness {

// Parses a workload document. Every key is optional and defaults to the
// WorkloadSpec default; unknown keys are rejected. Throws
// std::invalid_argument with the offending key on bad input.
//
// {
//   "mode": "dense" | "sparse" | "filter",
//   "n": 65536, "universe_bits": 24, "epsilon": 0.0078125,
//   "generator": "uniform" | "zipf" | "crafted-bin-collision" | "trace-file",
//   "zipf_s": 1.0, "zipf_pool": 65536, "repeat_fraction": 0.5,
//   "crafted_bins": 2, "crafted_fraction": 0.5, "trace": "ops.txt",
//   "op_mix": {"insert": 0.45, "delete": 0.10, "query": 0.45},
//   "op_count": 100000, "seeds": [1, 2, 3], "report_path": "out.json",
//   "audit_interval": 100000, "timing": true,
//   "dict": {"seed": 1, "delta_coeff": 1.0, "spare_slack": 2.0,
//            "relocation_limit": 10, "queue_capacity": 64,
//            "partition_count": 0, "feistel_independence": 8,
//            "permutation": "seeded" | "identity",
//            "heavy_threshold": 0, "light_threshold": 0}
// }
WorkloadSpec parse_workload(const std::string& json_text);
WorkloadSpec load_workload(const std::string& path);

// Inverse of parse_workload.
std::string workload_to_json(const WorkloadSpec& spec);

}  // namespace msdict::harness
