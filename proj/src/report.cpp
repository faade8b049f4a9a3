#include "occray/report.hpp"

namespace occray {

nlohmann::json to_json(const RayIoUReport& report, const ClassTaxonomy& taxonomy) {
    nlohmann::json out;
    out["per_threshold"] = nlohmann::json::array();
    for (const RayIoUThresholdBlock& block : report.per_threshold) {
        nlohmann::json jb;
        jb["tau"] = block.tau;
        nlohmann::json per_class = nlohmann::json::object();
        for (std::size_t c = 0; c < block.per_class.size(); ++c) {
            const ClassCounts& counts = block.per_class[c];
            if (counts.total() == 0) {
                continue;
            }
            nlohmann::json jc;
            jc["tp"] = counts.tp;
            jc["fp"] = counts.fp;
            jc["fn"] = counts.fn;
            if (block.iou[c]) {
                jc["iou"] = *block.iou[c];
            } else {
                jc["iou"] = nullptr;
            }
            per_class[taxonomy.name(c)] = std::move(jc);
        }
        jb["per_class"] = std::move(per_class);
        jb["mean"] = block.mean_iou;
        out["per_threshold"].push_back(std::move(jb));
    }
    out["rayiou"] = report.rayiou;
    out["rays_total"] = report.rays_total;
    out["rays_excluded"] = report.rays_excluded;
    out["empty"] = report.empty;
    return out;
}

nlohmann::json to_json(const RayPQReport& report, const ClassTaxonomy& taxonomy) {
    nlohmann::json out;
    out["per_threshold"] = nlohmann::json::array();
    for (const RayPQThresholdBlock& block : report.per_threshold) {
        nlohmann::json jb;
        jb["tau"] = block.tau;
        nlohmann::json per_class = nlohmann::json::object();
        for (std::size_t c = 0; c < block.per_class.size(); ++c) {
            if (!block.per_class[c]) {
                continue;
            }
            const RayPQClassBlock& cb = *block.per_class[c];
            per_class[taxonomy.name(c)] = {{"pq", cb.pq},  {"sq", cb.sq},
                                           {"rq", cb.rq},  {"tp", cb.tp},
                                           {"fp", cb.fp},  {"fn", cb.fn}};
        }
        jb["per_class"] = std::move(per_class);
        jb["mean_pq"] = block.mean_pq;
        jb["mean_sq"] = block.mean_sq;
        jb["mean_rq"] = block.mean_rq;
        nlohmann::json matches = nlohmann::json::array();
        for (const MatchedInstance& m : block.matches) {
            matches.push_back({{"sample", m.sample_set},
                               {"pred_id", m.pred_id},
                               {"gt_id", m.gt_id},
                               {"class", taxonomy.name(static_cast<std::size_t>(
                                             m.class_index))},
                               {"iou", m.iou}});
        }
        jb["matches"] = std::move(matches);
        out["per_threshold"].push_back(std::move(jb));
    }
    out["raypq"] = report.raypq;
    out["empty"] = report.empty;
    return out;
}

nlohmann::json to_json(const VoxelMIoUReport& report, const ClassTaxonomy& taxonomy) {
    nlohmann::json out;
    nlohmann::json per_class = nlohmann::json::object();
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        if (report.per_class[c]) {
            per_class[taxonomy.name(c)] = *report.per_class[c];
        }
    }
    out["per_class"] = std::move(per_class);
    out["mean"] = report.mean_iou;
    out["empty"] = report.empty;
    return out;
}

}  // namespace occray
