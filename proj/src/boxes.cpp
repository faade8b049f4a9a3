#include "occray/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occray {

bool box_contains(const Box3D& box, const Vec3& point) {
    const Vec3 rel = point - box.center;
    const double c = std::cos(box.yaw);
    const double s = std::sin(box.yaw);
    // Rotate into the box frame (inverse of the yaw rotation).
    const double lx = c * rel.x() + s * rel.y();
    const double ly = -s * rel.x() + c * rel.y();
    const double lz = rel.z();
    return std::abs(lx) <= 0.5 * box.size.x() && std::abs(ly) <= 0.5 * box.size.y() &&
           std::abs(lz) <= 0.5 * box.size.z();
}

std::vector<std::uint16_t> instances_from_boxes(const VoxelGrid& grid,
                                                const std::vector<Box3D>& boxes) {
    if (boxes.size() > 65535) {
        throw std::invalid_argument("instances_from_boxes: more than 65535 boxes");
    }
    for (const auto& box : boxes) {
        if (!(box.size.x() > 0.0 && box.size.y() > 0.0 && box.size.z() > 0.0)) {
            throw std::invalid_argument("instances_from_boxes: box sizes must be positive");
        }
        if (box.class_index < 0 ||
            static_cast<std::size_t>(box.class_index) >= grid.taxonomy().size() ||
            !grid.taxonomy().is_semantic(static_cast<std::size_t>(box.class_index))) {
            throw std::invalid_argument(
                "instances_from_boxes: box class must be a semantic class of the grid");
        }
    }

    std::vector<std::uint16_t> ids(grid.voxel_count(), 0);
    const Coord dims = grid.dims();
    const double vs = grid.voxel_size();

    for (std::size_t b = 0; b < boxes.size(); ++b) {
        const Box3D& box = boxes[b];
        // World-space AABB of the yawed box limits the candidate voxel range.
        const double c = std::abs(std::cos(box.yaw));
        const double s = std::abs(std::sin(box.yaw));
        const double hx = 0.5 * (c * box.size.x() + s * box.size.y());
        const double hy = 0.5 * (s * box.size.x() + c * box.size.y());
        const double hz = 0.5 * box.size.z();
        const Vec3 lo = box.center - Vec3(hx, hy, hz);
        const Vec3 hi = box.center + Vec3(hx, hy, hz);

        const auto clamp_cell = [&](double world, int axis_origin_index, int dim) {
            const double q = (world - grid.origin()[axis_origin_index]) / vs;
            return std::clamp(static_cast<int>(std::floor(q)), 0, dim - 1);
        };
        const int x0 = clamp_cell(lo.x(), 0, dims.x), x1 = clamp_cell(hi.x(), 0, dims.x);
        const int y0 = clamp_cell(lo.y(), 1, dims.y), y1 = clamp_cell(hi.y(), 1, dims.y);
        const int z0 = clamp_cell(lo.z(), 2, dims.z), z1 = clamp_cell(hi.z(), 2, dims.z);

        const auto id = static_cast<std::uint16_t>(b + 1);
        for (int x = x0; x <= x1; ++x) {
            for (int y = y0; y <= y1; ++y) {
                for (int z = z0; z <= z1; ++z) {
                    const Coord cell{x, y, z};
                    const std::size_t idx = grid.linear_index(cell);
                    if (ids[idx] != 0 || grid.label(idx) != box.class_index) {
                        continue;
                    }
                    if (box_contains(box, grid.voxel_center(cell))) {
                        ids[idx] = id;
                    }
                }
            }
        }
    }
    return ids;
}

}  // namespace occray
