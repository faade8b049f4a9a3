// RAYS v1 binary ray sets (little-endian):
//   magic "RAYS", version u32 = 1, count u64,
//   then per ray: origin 3 x f32, direction 3 x f32, waypoint_id u32.
#pragma once

#include "occray/raygen.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace occray {

void write_rays(const RaySet& rays, std::ostream& os);
void write_rays(const RaySet& rays, const std::filesystem::path& path);

// Rejects unknown magic or version, truncated payloads, and non-unit
// directions with std::runtime_error.
RaySet read_rays(std::istream& is, const std::string& source_name = "stream");
RaySet read_rays(const std::filesystem::path& path);

}  // namespace occray
