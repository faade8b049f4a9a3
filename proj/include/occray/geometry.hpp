// Shared small geometry types used across the library.
#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>

namespace occray {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Integer voxel coordinate. Comparisons order lexicographically by (x, y, z),
// which coincides with linear-index order for any grid the coordinate fits in.
struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend auto operator<=>(const Coord&, const Coord&) = default;
};

}  // namespace occray
