#include "occray/synth.hpp"

#include "occray/raycast.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace occray {

namespace {

// Converts a voxel-aligned world distance into a whole number of voxels.
long voxel_multiple(double value, double voxel_size, const char* what) {
    const double q = value / voxel_size;
    const long n = std::lround(q);
    if (std::abs(q - static_cast<double>(n)) > 1e-6) {
        throw std::invalid_argument(std::string("make_wall_scene: ") + what +
                                    " must be an integer multiple of voxel_size");
    }
    return n;
}

void fill_slab(VoxelGrid& grid, long x_begin, long x_end, int class_index,
               const char* what) {
    if (x_begin >= x_end) {
        throw std::invalid_argument(std::string("make_wall_scene: ") + what +
                                    " slab is empty");
    }
    if (x_begin < 0 || x_end > grid.dims().x) {
        throw std::invalid_argument(std::string("make_wall_scene: ") + what +
                                    " slab falls outside the grid");
    }
    for (long x = x_begin; x < x_end; ++x) {
        for (int y = 0; y < grid.dims().y; ++y) {
            for (int z = 0; z < grid.dims().z; ++z) {
                grid.set_label(Coord{static_cast<int>(x), y, z}, class_index);
            }
        }
    }
}

}  // namespace

WallScene make_wall_scene(const WallSceneSpec& spec, const ClassTaxonomy& taxonomy) {
    if (!(spec.d > 0.0)) {
        throw std::invalid_argument("make_wall_scene: d must be positive");
    }
    if (!(spec.d_v >= spec.voxel_size)) {
        throw std::invalid_argument("make_wall_scene: d_v must be at least one voxel");
    }
    if (spec.wall_class < 0 ||
        static_cast<std::size_t>(spec.wall_class) >= taxonomy.size() ||
        !taxonomy.is_semantic(static_cast<std::size_t>(spec.wall_class))) {
        throw std::invalid_argument("make_wall_scene: wall_class must be semantic");
    }

    const double vs = spec.voxel_size;
    // All slab faces are voxel boundaries; alignment is validated per field.
    const long view_cell = voxel_multiple(spec.viewpoint.x() - spec.origin.x(), vs,
                                          "viewpoint.x - origin.x");
    const long thickness = voxel_multiple(spec.d_v, vs, "d_v");
    const long gt_front = view_cell + voxel_multiple(spec.d, vs, "d");
    const long pred_front = gt_front + voxel_multiple(spec.shift, vs, "shift");
    const double far_bound =
        spec.pred_far_bound.value_or(spec.d + spec.d_v + std::max(spec.shift, 0.0));
    const long pred_far = spec.fill_behind
                              ? view_cell + voxel_multiple(far_bound, vs, "pred_far_bound")
                              : pred_front + thickness;

    VoxelGrid gt(spec.dims, spec.origin, vs, taxonomy);
    VoxelGrid pred(spec.dims, spec.origin, vs, taxonomy);
    fill_slab(gt, gt_front, gt_front + thickness, spec.wall_class, "ground truth");
    fill_slab(pred, pred_front, pred_far, spec.wall_class, "prediction");
    return WallScene{std::move(gt), std::move(pred)};
}

VoxelGrid thicken_behind(const VoxelGrid& grid, const Vec3& viewpoint,
                         const std::vector<Vec3>& pattern) {
    if (pattern.empty()) {
        throw std::invalid_argument("thicken_behind: empty direction pattern");
    }
    if (!viewpoint.allFinite()) {
        throw std::invalid_argument("thicken_behind: viewpoint must be finite");
    }
    VoxelGrid out = grid;
    for (const Vec3& direction : pattern) {
        if (std::abs(direction.norm() - 1.0) > 1e-6) {
            throw std::invalid_argument("thicken_behind: directions must be unit");
        }
        int fill_class = -1;
        traverse_grid(grid, viewpoint, direction,
                      std::numeric_limits<double>::infinity(),
                      [&](const Coord& cell, double) {
                          if (fill_class < 0) {
                              const int label = grid.label(grid.linear_index(cell));
                              if (static_cast<std::size_t>(label) !=
                                  grid.taxonomy().free_index()) {
                                  fill_class = label;
                              }
                              return true;
                          }
                          out.set_label(cell, fill_class);
                          return true;
                      });
    }
    return out;
}

InstanceScene make_instance_scene(std::uint64_t seed, int n_boxes,
                                  const InstanceSceneConfig& config,
                                  const ClassTaxonomy& taxonomy) {
    if (n_boxes < 0) {
        throw std::invalid_argument("make_instance_scene: n_boxes must be non-negative");
    }
    if (config.min_extent < 1 || config.max_extent < config.min_extent) {
        throw std::invalid_argument("make_instance_scene: invalid box extent range");
    }
    const std::vector<int> thing_classes = config.thing_classes.empty()
                                               ? ClassTaxonomy::nuscenes_thing_classes()
                                               : config.thing_classes;
    for (int c : thing_classes) {
        if (c < 0 || static_cast<std::size_t>(c) >= taxonomy.size() ||
            !taxonomy.is_semantic(static_cast<std::size_t>(c))) {
            throw std::invalid_argument("make_instance_scene: thing class must be semantic");
        }
    }

    VoxelGrid grid(config.dims, config.origin, config.voxel_size, taxonomy);
    std::mt19937_64 rng(seed);
    // Bounded draws via modulo keep the sequence identical across standard
    // library implementations.
    const auto draw = [&rng](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    struct VoxelBox {
        int lo[3];
        int ext[3];
    };
    std::vector<VoxelBox> placed;
    std::vector<Box3D> boxes;
    const int usable_z = config.dims.z - config.top_margin;
    for (int b = 0; b < n_boxes; ++b) {
        bool ok = false;
        for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
            VoxelBox candidate;
            const int limit[3] = {config.dims.x, config.dims.y, usable_z};
            bool fits = true;
            for (int a = 0; a < 3; ++a) {
                const int max_ext = std::min(config.max_extent, limit[a]);
                if (max_ext < config.min_extent) {
                    fits = false;
                    break;
                }
                candidate.ext[a] = draw(config.min_extent, max_ext);
                candidate.lo[a] = draw(0, limit[a] - candidate.ext[a]);
            }
            if (!fits) {
                break;
            }
            bool overlaps = false;
            for (const VoxelBox& other : placed) {
                bool disjoint = false;
                for (int a = 0; a < 3; ++a) {
                    if (candidate.lo[a] + candidate.ext[a] <= other.lo[a] ||
                        other.lo[a] + other.ext[a] <= candidate.lo[a]) {
                        disjoint = true;
                        break;
                    }
                }
                if (!disjoint) {
                    overlaps = true;
                    break;
                }
            }
            if (overlaps) {
                continue;
            }
            placed.push_back(candidate);
            Box3D box;
            for (int a = 0; a < 3; ++a) {
                box.center[a] = config.origin[a] +
                                config.voxel_size *
                                    (candidate.lo[a] + 0.5 * candidate.ext[a]);
                box.size[a] = config.voxel_size * candidate.ext[a];
            }
            box.yaw = 0.0;
            box.class_index = thing_classes[static_cast<std::size_t>(
                draw(0, static_cast<int>(thing_classes.size()) - 1))];
            boxes.push_back(box);
            for (int x = candidate.lo[0]; x < candidate.lo[0] + candidate.ext[0]; ++x) {
                for (int y = candidate.lo[1]; y < candidate.lo[1] + candidate.ext[1]; ++y) {
                    for (int z = candidate.lo[2]; z < candidate.lo[2] + candidate.ext[2];
                         ++z) {
                        grid.set_label(Coord{x, y, z}, box.class_index);
                    }
                }
            }
            ok = true;
        }
        if (!ok) {
            throw std::runtime_error("make_instance_scene: could not place box " +
                                     std::to_string(b) + " for seed " +
                                     std::to_string(seed));
        }
    }
    grid.set_instances(instances_from_boxes(grid, boxes));
    return InstanceScene{std::move(grid), std::move(boxes)};
}

}  // namespace occray
