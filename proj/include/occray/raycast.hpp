// First-hit ray casting against a voxel grid. cast_ray walks cells with a
// 3D DDA after clipping the ray to the grid bounds; oracle_march is an
// intentionally simple fixed-step sampler used to cross-check it.
#pragma once

#include "occray/raygen.hpp"
#include "occray/voxel_grid.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace occray {

inline constexpr double kDefaultMaxRange = 80.0;

struct Hit {
    double distance = 0.0;  // distance to the entry face, 0 if origin inside
    Coord coord;
    int class_index = 0;
    std::uint32_t instance_id = 0;  // 0 when the grid carries no instances
};

struct CastResult {
    enum class Kind : std::uint8_t { hit, miss, invalid_ray };

    Kind kind = Kind::miss;
    Hit hit{};  // meaningful only when kind == hit

    bool is_hit() const noexcept { return kind == Kind::hit; }
    bool is_miss() const noexcept { return kind == Kind::miss; }
    bool is_invalid() const noexcept { return kind == Kind::invalid_ray; }

    static CastResult make_hit(const Hit& h) { return {Kind::hit, h}; }
    static CastResult make_miss() { return {}; }
    static CastResult make_invalid() { return {Kind::invalid_ray, {}}; }
};

// Walks the voxels intersected by origin + t * direction for t in
// [0, max_range], in entry order. The visitor receives each cell and the
// clipped t at which the ray enters it; returning false stops the walk.
// Direction must be unit length. Cells are half-open: a ray point exactly on
// a shared face belongs to the higher-index cell, and simultaneous boundary
// crossings step the axes in x, y, z order.
template <typename Visitor>
void traverse_grid(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                   double max_range, Visitor&& visit) {
    constexpr double kParallelEps = 1e-12;
    const Vec3 bmin = grid.min_bound();
    const Vec3 bmax = grid.max_bound();
    const int dims[3] = {grid.dims().x, grid.dims().y, grid.dims().z};
    const double vs = grid.voxel_size();

    double t0 = 0.0;
    double t1 = max_range;
    for (int a = 0; a < 3; ++a) {
        if (std::abs(direction[a]) >= kParallelEps) {
            const double inv = 1.0 / direction[a];
            double ta = (bmin[a] - origin[a]) * inv;
            double tb = (bmax[a] - origin[a]) * inv;
            if (ta > tb) {
                std::swap(ta, tb);
            }
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
        }
        // Axes the ray is parallel to are resolved by the cell test below.
    }
    if (t0 > t1) {
        return;
    }

    const Vec3 entry = origin + t0 * direction;
    int cell[3];
    int step[3];
    double t_max[3];
    double t_delta[3];
    for (int a = 0; a < 3; ++a) {
        const double q = (entry[a] - bmin[a]) / vs + kCellSnapEps;
        int c = static_cast<int>(std::floor(q));
        const bool parallel = std::abs(direction[a]) < kParallelEps;
        if (c < 0) {
            if (parallel || direction[a] < 0.0) {
                return;
            }
            c = 0;
        } else if (c >= dims[a]) {
            // Entering through the far face: the boundary point itself
            // belongs to the outside cell, the first interior cell follows.
            if (parallel || direction[a] > 0.0) {
                return;
            }
            c = dims[a] - 1;
        }
        cell[a] = c;
        if (parallel) {
            step[a] = 0;
            t_max[a] = std::numeric_limits<double>::infinity();
            t_delta[a] = std::numeric_limits<double>::infinity();
        } else if (direction[a] > 0.0) {
            step[a] = 1;
            t_delta[a] = vs / direction[a];
            t_max[a] = (bmin[a] + (c + 1) * vs - origin[a]) / direction[a];
        } else {
            step[a] = -1;
            t_delta[a] = -vs / direction[a];
            t_max[a] = (bmin[a] + c * vs - origin[a]) / direction[a];
        }
    }

    double t_entry = t0;
    for (;;) {
        if (!visit(Coord{cell[0], cell[1], cell[2]}, t_entry)) {
            return;
        }
        int m = 0;
        if (t_max[1] < t_max[m]) {
            m = 1;
        }
        if (t_max[2] < t_max[m]) {
            m = 2;
        }
        const double t_next = t_max[m];
        if (t_next > t1) {
            return;
        }
        cell[m] += step[m];
        if (cell[m] < 0 || cell[m] >= dims[m]) {
            return;
        }
        t_max[m] += t_delta[m];
        t_entry = std::max(t_entry, t_next);
    }
}

// First non-free voxel along the ray within max_range. Hit.distance is the
// distance to the voxel's entry face (0 when the origin lies inside it).
// Throws std::invalid_argument on a non-unit direction (tolerance 1e-6),
// non-finite origin, or non-positive max_range.
CastResult cast_ray(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                    double max_range = kDefaultMaxRange);

// Element i equals cast_ray on rays[i]; malformed rays yield invalid_ray
// entries instead of aborting the batch. Results are bitwise independent of
// the thread count.
std::vector<CastResult> cast_batch(const VoxelGrid& grid, const RaySet& rays,
                                   double max_range = kDefaultMaxRange,
                                   unsigned threads = 1);

// Fixed-step reference caster: samples t = 0, step, 2*step, ... <= max_range
// and reports the voxel of the first sample with a non-free label. Slower
// and coarser than cast_ray but implemented independently of the DDA walk.
// Throws std::invalid_argument unless 0 < step <= voxel_size / 4 (and on the
// same ray errors as cast_ray).
CastResult oracle_march(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                        double max_range, double step);

}  // namespace occray
