// Yaw-rotated 3D bounding boxes and derivation of per-voxel instance IDs.
#pragma once

#include "occray/geometry.hpp"
#include "occray/voxel_grid.hpp"

#include <cstdint>
#include <vector>

namespace occray {

// Box rotated by yaw around the world z axis through its center.
struct Box3D {
    Vec3 center = Vec3::Zero();
    Vec3 size = Vec3::Zero();  // full extents (x, y, z) in the box frame
    double yaw = 0.0;
    int class_index = 0;
};

// True if the point lies inside the box (closed test on all faces).
bool box_contains(const Box3D& box, const Vec3& point);

// Assigns instance ID i+1 to every voxel whose center lies inside boxes[i]
// and whose semantic label equals the box class; earlier boxes win where
// boxes overlap. Free voxels always get ID 0. Throws std::invalid_argument
// on non-positive box sizes, a class outside the grid taxonomy, or more
// than 65535 boxes.
std::vector<std::uint16_t> instances_from_boxes(const VoxelGrid& grid,
                                                const std::vector<Box3D>& boxes);

}  // namespace occray
