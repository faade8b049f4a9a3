// Query-ray generation: a distance-balanced LiDAR-style direction pattern
// replicated across waypoints of an ego trajectory.
#pragma once

#include "occray/geometry.hpp"

#include <cstdint>
#include <vector>

namespace occray {

// Direction pattern parameters. Downward elevations are chosen so that rays
// from sensor_height above flat ground strike it at ranges r_min,
// r_min + ground_spacing, ... up to r_max (equal ground spacing rather than
// equal angular spacing). upper_elevations lists extra channels in radians
// at or above the horizon.
struct LidarPatternConfig {
    double sensor_height = 2.0;
    int azimuth_count = 360;
    double ground_spacing = 1.0;
    double r_min = 1.0;
    double r_max = 40.0;
    std::vector<double> upper_elevations;  // defaulted in make_default()

    static LidarPatternConfig make_default();
};

// 0 to +10 degrees in 1-degree steps, in radians.
std::vector<double> default_upper_elevations();

// Throws std::invalid_argument on non-positive heights/spacings/counts or
// r_max < r_min.
void validate(const LidarPatternConfig& config);

// Sorted ascending (steepest downward channel first), exact duplicates
// removed. Downward channel i has elevation -atan(sensor_height / r_i).
std::vector<double> elevation_channels(const LidarPatternConfig& config);

// Unit directions (cos e cos a, cos e sin a, sin e) for every elevation
// channel (outer) and azimuth a_j = 2*pi*j / azimuth_count (inner), with
// azimuth 0 along +x turning counterclockwise.
std::vector<Vec3> lidar_pattern(const LidarPatternConfig& config);

struct Pose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    double timestamp = 0.0;
};

// True if the matrix is orthonormal with determinant +1 within tol.
bool is_valid_rotation(const Mat3& m, double tol = 1e-6);

struct Trajectory {
    std::vector<Pose> poses;
    std::size_t current_index = 0;
};

// Throws std::invalid_argument on empty poses, out-of-range current_index,
// non-increasing timestamps, or an invalid rotation.
void validate(const Trajectory& trajectory);

// Picks n poses at indices evenly spaced over the trajectory (rounded to the
// nearest index, deduplicated). The pose at current_index is always included;
// if the spaced picks miss it, it replaces the nearest pick. Returns all
// poses when the trajectory has at most n.
std::vector<Pose> temporal_origins(const Trajectory& trajectory, std::size_t n = 8);

struct Ray {
    Vec3 origin = Vec3::Zero();
    Vec3 direction = Vec3::UnitX();
    std::uint32_t waypoint_id = 0;
};

// Invariant: directions have unit norm within 1e-6.
struct RaySet {
    std::vector<Ray> rays;
};

// One ray per (origin pose, pattern direction), pose-major order; directions
// are rotated by the pose, origins are the pose translations, and
// waypoint_id is the index of the pose within `origins`.
RaySet build_query_rays(const std::vector<Vec3>& pattern, const std::vector<Pose>& origins);

}  // namespace occray
