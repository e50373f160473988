#pragma once

#include <string>
#include <vector>

#include "msdict/harness/experiments.hpp"
#include "msdict/harness/workload.hpp"

namespace msdict::harness {

inline constexpr int kReportSchemaVersion = 1;

// JSON documents carrying "schema_version". Throws std::domain_error if a
// numeric field is not finite.
std::string to_json(const Report& report);
std::string to_json(const Claim2Stats& stats);
std::string to_json(const BalanceStats& stats);
std::string to_json(const std::vector<SpaceAudit>& audits);
std::string to_json(const FilterStats& stats);

// Writes text to path, or to stdout when path is "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace msdict::harness
