// Command-line front end: evaluate occupancy grids (eval), generate
// synthetic scenes (synth), emit query-ray sets (rays), and summarize grid
// contents (stats). Exit codes: 0 success, 1 empty evaluation, 2 bad input.
#include "occray/boxes.hpp"
#include "occray/eval.hpp"
#include "occray/grid_io.hpp"
#include "occray/rays_io.hpp"
#include "occray/report.hpp"
#include "occray/synth.hpp"
#include "occray/trajectory_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEmptyEvaluation = 1;
constexpr int kExitInputError = 2;

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    os << j.dump(2) << "\n";
    if (!os) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

occray::Coord parse_dims(const std::string& text) {
    occray::Coord dims;
    if (std::sscanf(text.c_str(), "%dx%dx%d", &dims.x, &dims.y, &dims.z) != 3) {
        throw CLI::ValidationError("--dims", "expected WxHxD, e.g. 200x200x16");
    }
    return dims;
}

struct PatternFlags {
    double upper_min_deg = 0.0;
    double upper_max_deg = 10.0;
    double upper_step_deg = 1.0;
    bool no_upper = false;

    void add_to(CLI::App& cmd, occray::LidarPatternConfig& pattern) {
        cmd.add_option("--sensor-height", pattern.sensor_height,
                       "Sensor height above ground for the downward channels [m]");
        cmd.add_option("--azimuth-count", pattern.azimuth_count,
                       "Number of azimuth steps per channel");
        cmd.add_option("--ground-spacing", pattern.ground_spacing,
                       "Ground-range spacing of the downward channels [m]");
        cmd.add_option("--r-min", pattern.r_min, "Closest downward ground range [m]");
        cmd.add_option("--r-max", pattern.r_max, "Farthest downward ground range [m]");
        cmd.add_option("--upper-min-deg", upper_min_deg,
                       "Lowest above-horizon channel [deg]");
        cmd.add_option("--upper-max-deg", upper_max_deg,
                       "Highest above-horizon channel [deg]");
        cmd.add_option("--upper-step-deg", upper_step_deg,
                       "Above-horizon channel spacing [deg]");
        cmd.add_flag("--no-upper", no_upper, "Drop the above-horizon channels");
    }

    void apply(occray::LidarPatternConfig& pattern) const {
        pattern.upper_elevations.clear();
        if (no_upper) {
            return;
        }
        if (!(upper_step_deg > 0.0)) {
            throw std::invalid_argument("--upper-step-deg must be positive");
        }
        for (double deg = upper_min_deg; deg <= upper_max_deg + 1e-9;
             deg += upper_step_deg) {
            pattern.upper_elevations.push_back(deg * std::numbers::pi / 180.0);
        }
    }
};

int cmd_eval(const occray::EvalOptions& options, const std::filesystem::path& out_path) {
    occray::EvalOutput output = occray::run_eval(options);
    output.report["timestamp"] = iso_timestamp();
    write_json(output.report, out_path);
    std::cout << output.table;
    if (output.empty) {
        std::cerr << "eval: no ray survived exclusion (empty evaluation)\n";
        return kExitEmptyEvaluation;
    }
    return kExitOk;
}

int cmd_synth_wall(const occray::WallSceneSpec& spec,
                   const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const occray::WallScene scene = occray::make_wall_scene(spec);
    occray::write_occg(scene.gt, out_dir / "gt.occ");
    occray::write_occg(scene.pred, out_dir / "pred.occ");
    nlohmann::json manifest;
    manifest["scene"] = "wall";
    manifest["d"] = spec.d;
    manifest["d_v"] = spec.d_v;
    manifest["shift"] = spec.shift;
    manifest["fill_behind"] = spec.fill_behind;
    if (spec.pred_far_bound) {
        manifest["pred_far_bound"] = *spec.pred_far_bound;
    }
    manifest["dims"] = {spec.dims.x, spec.dims.y, spec.dims.z};
    manifest["origin"] = {spec.origin.x(), spec.origin.y(), spec.origin.z()};
    manifest["voxel_size"] = spec.voxel_size;
    manifest["wall_class"] = spec.wall_class;
    manifest["viewpoint"] = {spec.viewpoint.x(), spec.viewpoint.y(), spec.viewpoint.z()};
    write_json(manifest, out_dir / "manifest.json");
    std::cout << "wrote " << (out_dir / "gt.occ").string() << ", "
              << (out_dir / "pred.occ").string() << "\n";
    return kExitOk;
}

int cmd_synth_instances(std::uint64_t seed, int n_boxes,
                        const occray::InstanceSceneConfig& config,
                        const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const occray::InstanceScene scene = occray::make_instance_scene(seed, n_boxes, config);
    occray::write_occg(scene.gt, out_dir / "gt.occ");
    nlohmann::json manifest;
    manifest["scene"] = "instances";
    manifest["seed"] = seed;
    manifest["n_boxes"] = n_boxes;
    manifest["dims"] = {config.dims.x, config.dims.y, config.dims.z};
    manifest["origin"] = {config.origin.x(), config.origin.y(), config.origin.z()};
    manifest["voxel_size"] = config.voxel_size;
    auto boxes = nlohmann::json::array();
    for (const occray::Box3D& box : scene.boxes) {
        boxes.push_back({{"center", {box.center.x(), box.center.y(), box.center.z()}},
                         {"size", {box.size.x(), box.size.y(), box.size.z()}},
                         {"yaw", box.yaw},
                         {"class",
                          scene.gt.taxonomy().name(
                              static_cast<std::size_t>(box.class_index))}});
    }
    manifest["boxes"] = std::move(boxes);
    write_json(manifest, out_dir / "manifest.json");
    std::cout << "wrote " << (out_dir / "gt.occ").string() << " with "
              << scene.boxes.size() << " instances\n";
    return kExitOk;
}

int cmd_rays(const std::optional<std::filesystem::path>& traj_path,
             std::size_t n_waypoints, const occray::LidarPatternConfig& pattern,
             const std::filesystem::path& out_path) {
    std::vector<occray::Pose> origins;
    if (traj_path) {
        const occray::Trajectory trajectory = occray::read_trajectory(*traj_path);
        origins = occray::temporal_origins(trajectory, n_waypoints);
    } else {
        origins.push_back(occray::Pose{});
    }
    const occray::RaySet rays =
        occray::build_query_rays(occray::lidar_pattern(pattern), origins);
    occray::write_rays(rays, out_path);
    std::cout << "wrote " << rays.rays.size() << " rays ("
              << occray::elevation_channels(pattern).size() << " channels, "
              << origins.size() << " waypoints) to " << out_path.string() << "\n";
    return kExitOk;
}

int cmd_stats(const std::filesystem::path& grid_path,
              const std::optional<std::filesystem::path>& out_path) {
    const occray::VoxelGrid grid = occray::read_occg(grid_path);
    const occray::SparsityStats stats = occray::sparsity_stats(grid);
    const std::vector<double> weights = occray::class_balance_weights(stats.class_counts);

    std::cout << "grid " << grid.dims().x << "x" << grid.dims().y << "x" << grid.dims().z
              << ", voxel " << grid.voxel_size() << " m, "
              << (grid.has_instances() ? "instances, " : "")
              << (grid.has_visible_mask() ? "visible mask, " : "")
              << "free fraction " << stats.free_fraction << "\n";
    for (std::size_t c = 0; c < grid.taxonomy().size(); ++c) {
        if (stats.class_counts[c] == 0) {
            continue;
        }
        std::cout << "  " << grid.taxonomy().name(c) << ": " << stats.class_counts[c]
                  << " voxels, weight " << weights[c] << "\n";
    }
    if (out_path) {
        nlohmann::json j;
        j["dims"] = {grid.dims().x, grid.dims().y, grid.dims().z};
        j["voxel_size"] = grid.voxel_size();
        j["free_fraction"] = stats.free_fraction;
        nlohmann::json counts = nlohmann::json::object();
        nlohmann::json jweights = nlohmann::json::object();
        for (std::size_t c = 0; c < grid.taxonomy().size(); ++c) {
            counts[grid.taxonomy().name(c)] = stats.class_counts[c];
            jweights[grid.taxonomy().name(c)] = weights[c];
        }
        j["class_counts"] = std::move(counts);
        j["class_weights"] = std::move(jweights);
        write_json(j, *out_path);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ray-casting evaluation for 3D semantic/panoptic occupancy grids"};
    app.require_subcommand(1);

    // eval
    occray::EvalOptions eval_options;
    std::filesystem::path eval_out = "report.json";
    PatternFlags eval_pattern_flags;
    std::string eval_traj;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate predictions against ground truth");
    eval->add_option("--pred", eval_options.pred_paths, "Predicted grid(s) (.occ)")
        ->required();
    eval->add_option("--gt", eval_options.gt_paths, "Ground-truth grid(s) (.occ)")
        ->required();
    eval->add_option("--traj", eval_traj, "Ego trajectory text file");
    eval->add_option("--thresholds", eval_options.thresholds,
                     "Depth thresholds in meters")
        ->delimiter(',');
    eval->add_option("--n-waypoints", eval_options.n_waypoints,
                     "Trajectory waypoints to cast from");
    eval->add_option("--max-range", eval_options.max_range, "Ray range limit [m]");
    eval->add_flag("--voxel-miou", eval_options.compute_voxel_miou,
                   "Also compute voxel-level mIoU");
    eval->add_flag("--use-visible-mask", eval_options.use_visible_mask,
                   "Restrict voxel mIoU to the ground-truth visible mask");
    eval->add_flag("--panoptic", eval_options.panoptic, "Also compute RayPQ");
    eval->add_flag("--per-sample-mean", eval_options.per_sample_mean,
                   "Average per-frame means instead of pooling counts");
    eval->add_option("--threads", eval_options.threads, "Worker threads for casting");
    eval->add_option("--out", eval_out, "Report JSON path");
    eval_pattern_flags.add_to(*eval, eval_options.pattern);

    // synth
    CLI::App* synth = app.add_subcommand("synth", "Generate synthetic scenes");
    synth->require_subcommand(1);

    occray::WallSceneSpec wall_spec;
    std::string wall_dims_text, wall_origin_text, wall_class_name;
    double wall_far_bound = 0.0;
    std::filesystem::path wall_out_dir = "wall_scene";
    CLI::App* wall = synth->add_subcommand("wall", "Wall slab with a shifted prediction");
    wall->add_option("--d", wall_spec.d, "Viewpoint-to-wall distance [m]");
    wall->add_option("--dv", wall_spec.d_v, "Wall thickness [m]");
    wall->add_option("--shift", wall_spec.shift, "Prediction front-face shift [m]");
    wall->add_flag("--fill-behind", wall_spec.fill_behind,
                   "Fill the prediction from its front face to the far bound");
    CLI::Option* far_opt =
        wall->add_option("--pred-far-bound", wall_far_bound,
                         "Far bound of the filled prediction, from the viewpoint [m]");
    wall->add_option("--dims", wall_dims_text, "Grid dimensions WxHxD");
    wall->add_option("--voxel-size", wall_spec.voxel_size, "Voxel edge length [m]");
    wall->add_option("--origin", wall_origin_text, "Grid origin x,y,z");
    wall->add_option("--wall-class", wall_class_name, "Wall class name");
    wall->add_option("--out-dir", wall_out_dir, "Output directory");

    std::uint64_t inst_seed = 0;
    int inst_n = 3;
    occray::InstanceSceneConfig inst_config;
    std::string inst_dims_text, inst_origin_text;
    std::filesystem::path inst_out_dir = "instance_scene";
    CLI::App* instances =
        synth->add_subcommand("instances", "Seeded boxes with instance IDs");
    instances->add_option("--seed", inst_seed, "Random seed");
    instances->add_option("--n", inst_n, "Number of boxes");
    instances->add_option("--dims", inst_dims_text, "Grid dimensions WxHxD");
    instances->add_option("--voxel-size", inst_config.voxel_size, "Voxel edge length [m]");
    instances->add_option("--origin", inst_origin_text, "Grid origin x,y,z");
    instances->add_option("--out-dir", inst_out_dir, "Output directory");

    // rays
    std::string rays_traj;
    std::size_t rays_waypoints = 8;
    occray::LidarPatternConfig rays_pattern = occray::LidarPatternConfig::make_default();
    PatternFlags rays_pattern_flags;
    std::filesystem::path rays_out = "rays.bin";
    CLI::App* rays = app.add_subcommand("rays", "Write the query-ray set");
    rays->add_option("--traj", rays_traj, "Ego trajectory text file");
    rays->add_option("--n-waypoints", rays_waypoints, "Trajectory waypoints to keep");
    rays->add_option("--out", rays_out, "Output ray file");
    rays_pattern_flags.add_to(*rays, rays_pattern);

    // stats
    std::filesystem::path stats_grid;
    std::string stats_out;
    CLI::App* stats = app.add_subcommand("stats", "Summarize a grid file");
    stats->add_option("grid", stats_grid, "Grid file (.occ)")->required();
    stats->add_option("--out", stats_out, "Also write the summary as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (eval->parsed()) {
            if (!eval_traj.empty()) {
                eval_options.trajectory_path = eval_traj;
            }
            eval_pattern_flags.apply(eval_options.pattern);
            return cmd_eval(eval_options, eval_out);
        }
        if (wall->parsed()) {
            if (!wall_dims_text.empty()) {
                wall_spec.dims = parse_dims(wall_dims_text);
            }
            if (!wall_origin_text.empty()) {
                if (std::sscanf(wall_origin_text.c_str(), "%lf,%lf,%lf",
                                &wall_spec.origin.x(), &wall_spec.origin.y(),
                                &wall_spec.origin.z()) != 3) {
                    throw std::invalid_argument("--origin expects x,y,z");
                }
            }
            if (!wall_class_name.empty()) {
                const auto tax = occray::ClassTaxonomy::nuscenes();
                const auto idx = tax.index_of(wall_class_name);
                if (!idx) {
                    throw std::invalid_argument("unknown wall class " + wall_class_name);
                }
                wall_spec.wall_class = static_cast<int>(*idx);
            }
            if (far_opt->count() > 0) {
                wall_spec.pred_far_bound = wall_far_bound;
            }
            return cmd_synth_wall(wall_spec, wall_out_dir);
        }
        if (instances->parsed()) {
            if (!inst_dims_text.empty()) {
                inst_config.dims = parse_dims(inst_dims_text);
            }
            if (!inst_origin_text.empty()) {
                if (std::sscanf(inst_origin_text.c_str(), "%lf,%lf,%lf",
                                &inst_config.origin.x(), &inst_config.origin.y(),
                                &inst_config.origin.z()) != 3) {
                    throw std::invalid_argument("--origin expects x,y,z");
                }
            }
            return cmd_synth_instances(inst_seed, inst_n, inst_config, inst_out_dir);
        }
        if (rays->parsed()) {
            rays_pattern_flags.apply(rays_pattern);
            std::optional<std::filesystem::path> traj;
            if (!rays_traj.empty()) {
                traj = rays_traj;
            }
            return cmd_rays(traj, rays_waypoints, rays_pattern, rays_out);
        }
        if (stats->parsed()) {
            std::optional<std::filesystem::path> out;
            if (!stats_out.empty()) {
                out = stats_out;
            }
            return cmd_stats(stats_grid, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
