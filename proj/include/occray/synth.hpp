// Synthetic scenes with analytically known metric values: a single wall slab
// viewed head-on (with an optionally shifted / depth-filled prediction), a
// transform that duplicates surfaces along rays, and seeded box scenes with
// instance IDs.
#pragma once

#include "occray/boxes.hpp"
#include "occray/voxel_grid.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace occray {

// Ground truth: a wall slab spanning the full y/z extent whose front face is
// d ahead of the viewpoint along +x and which is d_v thick. Prediction: the
// front face sits at d + shift; without fill_behind it is d_v thick, with
// fill_behind it extends to pred_far_bound (measured from the viewpoint like
// d, defaulting to d + d_v + max(shift, 0), i.e. the ground-truth far face
// for closer-shifted predictions). All distances must be voxel-aligned.
struct WallSceneSpec {
    double d = 10.0;
    double d_v = 0.4;
    double shift = 0.0;
    bool fill_behind = false;
    std::optional<double> pred_far_bound;

    Coord dims{200, 200, 16};
    Vec3 origin{-40.0, -40.0, -1.0};
    double voxel_size = 0.4;
    int wall_class = 15;  // "manmade" in the default taxonomy
    Vec3 viewpoint{0.0, 0.0, 1.2};
};

struct WallScene {
    VoxelGrid gt;
    VoxelGrid pred;
};

// Throws std::invalid_argument when distances are not voxel multiples, the
// wall class is not semantic, or a slab falls outside the grid.
WallScene make_wall_scene(const WallSceneSpec& spec,
                          const ClassTaxonomy& taxonomy = ClassTaxonomy::nuscenes());

// For every pattern direction, finds the first non-free voxel along the ray
// from the viewpoint and overwrites every voxel the ray enters after it
// (to the grid boundary) with that voxel's class. First hits of these same
// rays are unchanged, so ray-level metrics cannot reward the thickening.
VoxelGrid thicken_behind(const VoxelGrid& grid, const Vec3& viewpoint,
                         const std::vector<Vec3>& pattern);

struct InstanceSceneConfig {
    Coord dims{64, 64, 16};
    Vec3 origin{-12.8, -12.8, -1.6};
    double voxel_size = 0.4;
    // Box extents in voxels, drawn uniformly per axis.
    int min_extent = 2;
    int max_extent = 5;
    // Topmost voxel layers kept box-free so tests can cast from above.
    int top_margin = 3;
    std::vector<int> thing_classes;  // defaults to the nuScenes thing classes
};

struct InstanceScene {
    VoxelGrid gt;
    std::vector<Box3D> boxes;
};

// Places n_boxes non-overlapping axis-aligned boxes of thing classes in free
// space, labels their voxels, and derives per-voxel instance IDs from the
// boxes. Deterministic for a given seed. Throws std::runtime_error (naming
// the seed) if a box cannot be placed.
InstanceScene make_instance_scene(std::uint64_t seed, int n_boxes,
                                  const InstanceSceneConfig& config = {},
                                  const ClassTaxonomy& taxonomy = ClassTaxonomy::nuscenes());

}  // namespace occray
