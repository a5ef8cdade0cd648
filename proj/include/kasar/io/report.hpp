#pragma once

#include <json.hpp>
#include <string>

#include "kasar/io/metrics.hpp"
#include "kasar/pipeline/pipeline.hpp"
#include "kasar/structure/limits.hpp"

namespace kasar::io {

nlohmann::json to_json(const pipeline::PipelineReport& r);
nlohmann::json to_json(const FocusMetrics& m);
nlohmann::json to_json(const structure::LimitReport& r);

/// Region of each (rho, a) pair for square resolution cells.
std::string region_table(double y0, const std::vector<double>& rhos, const std::vector<double>& coeffs);

}  // namespace kasar::io
