// JSON serialization of evaluation reports. Class keys are taxonomy names;
// classes that never occurred are omitted.
#pragma once

#include "occray/metrics.hpp"
#include "occray/panoptic.hpp"

#include <nlohmann/json.hpp>

namespace occray {

nlohmann::json to_json(const RayIoUReport& report, const ClassTaxonomy& taxonomy);
nlohmann::json to_json(const RayPQReport& report, const ClassTaxonomy& taxonomy);
nlohmann::json to_json(const VoxelMIoUReport& report, const ClassTaxonomy& taxonomy);

}  // namespace occray
