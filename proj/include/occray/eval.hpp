// End-to-end evaluation of predicted occupancy grids against ground truth:
// load grid pairs, generate query rays, cast into both grids, and reduce to
// a metrics report. Shared by the command-line tool and the tests.
#pragma once

#include "occray/raygen.hpp"
#include "occray/raycast.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace occray {

struct EvalOptions {
    std::vector<std::filesystem::path> pred_paths;
    std::vector<std::filesystem::path> gt_paths;
    std::optional<std::filesystem::path> trajectory_path;
    std::vector<double> thresholds{1.0, 2.0, 4.0};
    std::size_t n_waypoints = 8;
    LidarPatternConfig pattern = LidarPatternConfig::make_default();
    double max_range = kDefaultMaxRange;
    bool compute_voxel_miou = false;
    bool use_visible_mask = false;
    bool panoptic = false;
    // Average per-frame mean IoUs instead of pooling counts across frames.
    bool per_sample_mean = false;
    unsigned threads = 1;
};

struct EvalOutput {
    nlohmann::json report;
    std::string table;   // human-readable summary
    bool empty = false;  // no ray survived exclusion
};

// Throws std::runtime_error / std::invalid_argument (naming the offending
// file where applicable) on unreadable inputs, mismatched pairings, grid
// geometry or taxonomy mismatches, or a missing visible mask when
// use_visible_mask is set.
EvalOutput run_eval(const EvalOptions& options);

// Query rays for one evaluation: the pattern placed at the trajectory
// waypoints, or at a single default pose centered in the grid footprint at
// sensor height when no trajectory is given.
RaySet eval_rays(const EvalOptions& options, const VoxelGrid& reference_grid);

}  // namespace occray
