#include "occray/eval.hpp"

#include "occray/grid_io.hpp"
#include "occray/metrics.hpp"
#include "occray/panoptic.hpp"
#include "occray/report.hpp"
#include "occray/trajectory_io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace occray {

namespace {

std::vector<RayEvalSample> zip_samples(const std::vector<CastResult>& gt,
                                       const std::vector<CastResult>& pred) {
    std::vector<RayEvalSample> samples(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i) {
        samples[i] = RayEvalSample{gt[i], pred[i]};
    }
    return samples;
}

nlohmann::json config_json(const EvalOptions& options) {
    nlohmann::json config;
    auto paths = nlohmann::json::array();
    for (const auto& p : options.pred_paths) {
        paths.push_back(p.string());
    }
    config["pred"] = std::move(paths);
    paths = nlohmann::json::array();
    for (const auto& p : options.gt_paths) {
        paths.push_back(p.string());
    }
    config["gt"] = std::move(paths);
    config["trajectory"] =
        options.trajectory_path ? nlohmann::json(options.trajectory_path->string())
                                : nlohmann::json(nullptr);
    config["thresholds_m"] = options.thresholds;
    config["n_waypoints"] = options.n_waypoints;
    config["max_range"] = options.max_range;
    config["voxel_miou"] = options.compute_voxel_miou;
    config["use_visible_mask"] = options.use_visible_mask;
    config["panoptic"] = options.panoptic;
    config["per_sample_mean"] = options.per_sample_mean;
    // The thread count only affects scheduling, never results, so it is left
    // out to keep reports identical across --threads settings.
    config["pattern"] = {{"sensor_height", options.pattern.sensor_height},
                         {"azimuth_count", options.pattern.azimuth_count},
                         {"ground_spacing", options.pattern.ground_spacing},
                         {"r_min", options.pattern.r_min},
                         {"r_max", options.pattern.r_max},
                         {"upper_elevations", options.pattern.upper_elevations}};
    return config;
}

std::string render_table(const RayIoUReport& ray_report,
                         const RayPQReport* pq_report,
                         const VoxelMIoUReport* voxel_report,
                         const ClassTaxonomy& taxonomy) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << std::left << std::setw(22) << "class";
    for (const auto& block : ray_report.per_threshold) {
        std::ostringstream header;
        header << "tau=" << std::setprecision(2) << std::fixed << block.tau;
        os << std::right << std::setw(12) << header.str();
    }
    os << "\n";
    for (std::size_t c = 0; c < taxonomy.size(); ++c) {
        if (!taxonomy.is_semantic(c)) {
            continue;
        }
        bool any = false;
        for (const auto& block : ray_report.per_threshold) {
            if (block.per_class[c].total() > 0) {
                any = true;
                break;
            }
        }
        if (!any) {
            continue;
        }
        os << std::left << std::setw(22) << taxonomy.name(c);
        for (const auto& block : ray_report.per_threshold) {
            if (block.iou[c]) {
                os << std::right << std::setw(12) << *block.iou[c];
            } else {
                os << std::right << std::setw(12) << "-";
            }
        }
        os << "\n";
    }
    os << std::left << std::setw(22) << "mean";
    for (const auto& block : ray_report.per_threshold) {
        os << std::right << std::setw(12) << block.mean_iou;
    }
    os << "\n";
    os << "RayIoU: " << ray_report.rayiou << "\n";
    os << "rays: " << ray_report.rays_total << " total, " << ray_report.rays_excluded
       << " excluded\n";
    if (voxel_report != nullptr) {
        os << "voxel mIoU: " << voxel_report->mean_iou << "\n";
    }
    if (pq_report != nullptr) {
        os << "RayPQ: " << pq_report->raypq;
        if (pq_report->empty) {
            os << " (no ground-truth instances)";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace

RaySet eval_rays(const EvalOptions& options, const VoxelGrid& reference_grid) {
    const std::vector<Vec3> pattern = lidar_pattern(options.pattern);
    std::vector<Pose> origins;
    if (options.trajectory_path) {
        const Trajectory trajectory = read_trajectory(*options.trajectory_path);
        origins = temporal_origins(trajectory, options.n_waypoints);
    } else {
        // Single viewpoint: grid footprint center at sensor height above the
        // z = 0 ground plane.
        Pose pose;
        const Vec3 lo = reference_grid.min_bound();
        const Vec3 hi = reference_grid.max_bound();
        pose.translation =
            Vec3(0.5 * (lo.x() + hi.x()), 0.5 * (lo.y() + hi.y()),
                 options.pattern.sensor_height);
        origins.push_back(pose);
    }
    return build_query_rays(pattern, origins);
}

EvalOutput run_eval(const EvalOptions& options) {
    if (options.pred_paths.empty() || options.gt_paths.empty()) {
        throw std::invalid_argument("eval: at least one prediction and ground truth "
                                    "grid required");
    }
    if (options.pred_paths.size() != options.gt_paths.size()) {
        throw std::invalid_argument("eval: prediction and ground truth counts differ");
    }
    if (!(options.max_range > 0.0)) {
        throw std::invalid_argument("eval: max_range must be positive");
    }

    std::optional<RayIoUAccumulator> pooled;
    std::optional<RayPQAccumulator> pq;
    std::optional<VoxelConfusion> voxel_confusion;
    std::vector<RayIoUReport> per_sample_reports;
    std::optional<ClassTaxonomy> taxonomy;
    RaySet rays;
    bool rays_built = false;

    for (std::size_t s = 0; s < options.gt_paths.size(); ++s) {
        const VoxelGrid gt = read_occg(options.gt_paths[s]);
        const VoxelGrid pred = read_occg(options.pred_paths[s]);
        if (!pred.same_geometry(gt)) {
            throw std::runtime_error("eval: grid geometry of " +
                                     options.pred_paths[s].string() +
                                     " does not match " + options.gt_paths[s].string());
        }
        if (pred.taxonomy() != gt.taxonomy()) {
            throw std::runtime_error("eval: taxonomy of " +
                                     options.pred_paths[s].string() +
                                     " does not match " + options.gt_paths[s].string());
        }
        if (!taxonomy) {
            taxonomy = gt.taxonomy();
            pooled.emplace(*taxonomy, options.thresholds);
            if (options.panoptic) {
                pq.emplace(*taxonomy, options.thresholds);
            }
            if (options.compute_voxel_miou) {
                voxel_confusion.emplace(taxonomy->size());
            }
        } else if (gt.taxonomy() != *taxonomy) {
            throw std::runtime_error("eval: taxonomy of " + options.gt_paths[s].string() +
                                     " does not match the first sample");
        }
        if (options.use_visible_mask && !gt.has_visible_mask()) {
            throw std::runtime_error("eval: " + options.gt_paths[s].string() +
                                     " carries no visible mask");
        }

        if (!rays_built) {
            rays = eval_rays(options, gt);
            rays_built = true;
        }

        const std::vector<CastResult> gt_hits =
            cast_batch(gt, rays, options.max_range, options.threads);
        const std::vector<CastResult> pred_hits =
            cast_batch(pred, rays, options.max_range, options.threads);
        const std::vector<RayEvalSample> samples = zip_samples(gt_hits, pred_hits);

        pooled->add(samples);
        if (options.per_sample_mean) {
            per_sample_reports.push_back(rayiou(samples, options.thresholds, *taxonomy));
        }
        if (pq) {
            pq->add_sample_set(samples);
        }
        if (voxel_confusion) {
            accumulate_voxel_confusion(*voxel_confusion, pred, gt,
                                       options.use_visible_mask ? gt.visible_mask()
                                                                : std::span<const std::uint8_t>{});
        }
    }

    RayIoUReport ray_report = pooled->report();
    if (options.per_sample_mean) {
        // Replace the pooled means with averages of the per-frame means;
        // frames whose rays were all excluded do not participate.
        double sum = 0.0;
        std::vector<double> threshold_sums(options.thresholds.size(), 0.0);
        std::size_t used = 0;
        for (const RayIoUReport& r : per_sample_reports) {
            if (r.empty) {
                continue;
            }
            sum += r.rayiou;
            for (std::size_t t = 0; t < r.per_threshold.size(); ++t) {
                threshold_sums[t] += r.per_threshold[t].mean_iou;
            }
            ++used;
        }
        if (used > 0) {
            ray_report.rayiou = sum / static_cast<double>(used);
            for (std::size_t t = 0; t < ray_report.per_threshold.size(); ++t) {
                ray_report.per_threshold[t].mean_iou =
                    threshold_sums[t] / static_cast<double>(used);
            }
        }
    }

    EvalOutput output;
    output.empty = ray_report.empty;
    output.report = to_json(ray_report, *taxonomy);
    output.report["thresholds_m"] = options.thresholds;

    std::optional<RayPQReport> pq_report;
    if (pq) {
        pq_report = pq->report();
        output.report["raypq"] = to_json(*pq_report, *taxonomy);
    } else {
        output.report["raypq"] = nullptr;
    }
    std::optional<VoxelMIoUReport> voxel_report;
    if (voxel_confusion) {
        voxel_report = voxel_miou_from(*voxel_confusion, *taxonomy);
        output.report["voxel_miou"] = to_json(*voxel_report, *taxonomy);
    } else {
        output.report["voxel_miou"] = nullptr;
    }
    output.report["config"] = config_json(options);
    output.table = render_table(ray_report, pq_report ? &*pq_report : nullptr,
                                voxel_report ? &*voxel_report : nullptr, *taxonomy);
    return output;
}

}  // namespace occray
