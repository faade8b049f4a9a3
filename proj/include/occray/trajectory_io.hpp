// Plain-text ego trajectories. One pose per line:
//   timestamp r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz
// (row-major rotation, then translation). '#' starts a comment; a line
// "current <index>" selects the frame under evaluation (default 0).
#pragma once

#include "occray/raygen.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace occray {

// Throws std::runtime_error naming the source and line on malformed input;
// the parsed trajectory is validated (rotations, timestamp order).
Trajectory parse_trajectory(std::istream& is, const std::string& source_name = "stream");
Trajectory read_trajectory(const std::filesystem::path& path);

void write_trajectory(const Trajectory& trajectory, std::ostream& os);
void write_trajectory(const Trajectory& trajectory, const std::filesystem::path& path);

}  // namespace occray
