#pragma once

#include <json.hpp>

#include "msdict/harness/workload.hpp"

namespace msdict::harness::detail {

nlohmann::json workload_json(const WorkloadSpec& spec);

}  // namespace msdict::harness::detail
