#include "occray/panoptic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace occray {

namespace {

struct InstanceInfo {
    std::uint64_t ray_count = 0;
    int class_index = -1;  // class of the first ray seen
};

// Instance inventories over non-excluded rays, keyed by ID; std::map keeps
// iteration deterministic.
struct FrameInstances {
    std::map<std::uint32_t, InstanceInfo> pred;
    std::map<std::uint32_t, InstanceInfo> gt;
    // Matched-ray counts per (pred, gt) pair for one tau.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> pair_matches;
};

FrameInstances collect_instances(std::span<const RayEvalSample> samples, double tau) {
    FrameInstances frame;
    for (const RayEvalSample& sample : samples) {
        if (!sample.gt.is_hit()) {
            continue;  // excluded rays contribute nothing
        }
        const Hit& gt = sample.gt.hit;
        if (gt.instance_id != 0) {
            auto& info = frame.gt[gt.instance_id];
            if (info.ray_count++ == 0) {
                info.class_index = gt.class_index;
            }
        }
        if (!sample.pred.is_hit()) {
            continue;
        }
        const Hit& pred = sample.pred.hit;
        if (pred.instance_id != 0) {
            auto& info = frame.pred[pred.instance_id];
            if (info.ray_count++ == 0) {
                info.class_index = pred.class_index;
            }
        }
        if (pred.instance_id != 0 && gt.instance_id != 0 &&
            pred.class_index == gt.class_index &&
            std::abs(pred.distance - gt.distance) <= tau) {
            ++frame.pair_matches[{pred.instance_id, gt.instance_id}];
        }
    }
    return frame;
}

double pair_iou(const FrameInstances& frame, std::uint32_t pred_id, std::uint32_t gt_id) {
    const auto p = frame.pred.find(pred_id);
    const auto g = frame.gt.find(gt_id);
    const std::uint64_t p_rays = p == frame.pred.end() ? 0 : p->second.ray_count;
    const std::uint64_t g_rays = g == frame.gt.end() ? 0 : g->second.ray_count;
    const auto m = frame.pair_matches.find({pred_id, gt_id});
    const std::uint64_t matched = m == frame.pair_matches.end() ? 0 : m->second;
    const std::uint64_t denom = p_rays + g_rays - matched;
    if (denom == 0) {
        return 0.0;
    }
    return static_cast<double>(matched) / static_cast<double>(denom);
}

}  // namespace

double ray_instance_iou(std::span<const RayEvalSample> samples,
                        std::uint32_t pred_instance, std::uint32_t gt_instance,
                        double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("ray_instance_iou: tau must be positive and finite");
    }
    if (pred_instance == 0 || gt_instance == 0) {
        return 0.0;
    }
    const FrameInstances frame = collect_instances(samples, tau);
    return pair_iou(frame, pred_instance, gt_instance);
}

std::vector<InstancePair> match_instances(std::vector<InstancePair> table,
                                          double iou_threshold) {
    if (!(iou_threshold >= 0.5)) {
        throw std::invalid_argument(
            "match_instances: iou_threshold below 0.5 loses the one-to-one guarantee");
    }
    std::vector<InstancePair> selected;
    for (const InstancePair& pair : table) {
        if (pair.iou > iou_threshold) {
            selected.push_back(pair);
        }
    }
    std::set<std::uint32_t> pred_seen;
    std::set<std::uint32_t> gt_seen;
    for (const InstancePair& pair : selected) {
        if (!pred_seen.insert(pair.pred_id).second || !gt_seen.insert(pair.gt_id).second) {
            throw std::invalid_argument(
                "match_instances: table claims several pairs above the threshold for one "
                "instance, which ray-set IoU cannot produce");
        }
    }
    std::sort(selected.begin(), selected.end(), [](const auto& a, const auto& b) {
        return a.pred_id != b.pred_id ? a.pred_id < b.pred_id : a.gt_id < b.gt_id;
    });
    return selected;
}

RayPQAccumulator::RayPQAccumulator(const ClassTaxonomy& taxonomy,
                                   std::vector<double> thresholds, double iou_threshold)
    : num_classes_(taxonomy.size()),
      thresholds_(std::move(thresholds)),
      iou_threshold_(iou_threshold) {
    if (thresholds_.empty()) {
        throw std::invalid_argument("raypq: at least one depth threshold required");
    }
    for (double tau : thresholds_) {
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            throw std::invalid_argument("raypq: thresholds must be positive and finite");
        }
    }
    if (!(iou_threshold >= 0.5)) {
        throw std::invalid_argument("raypq: iou_threshold must be at least 0.5");
    }
    stats_.assign(thresholds_.size(), std::vector<ClassStats>(num_classes_));
    matches_.assign(thresholds_.size(), {});
}

void RayPQAccumulator::add_sample_set(std::span<const RayEvalSample> samples) {
    const std::size_t set_index = sample_sets_++;
    for (std::size_t t = 0; t < thresholds_.size(); ++t) {
        const FrameInstances frame = collect_instances(samples, thresholds_[t]);
        if (!frame.gt.empty()) {
            any_gt_instances_ = true;
        }

        // Candidate pairs per class, from the pairs that share matched rays.
        std::map<int, std::vector<InstancePair>> tables;
        for (const auto& [ids, matched] : frame.pair_matches) {
            (void)matched;
            const auto& pred_info = frame.pred.at(ids.first);
            const auto& gt_info = frame.gt.at(ids.second);
            if (pred_info.class_index != gt_info.class_index) {
                continue;
            }
            tables[pred_info.class_index].push_back(
                InstancePair{ids.first, ids.second, pair_iou(frame, ids.first, ids.second)});
        }

        auto& stats = stats_[t];
        std::map<int, std::uint64_t> matched_pred;
        std::map<int, std::uint64_t> matched_gt;
        for (auto& [class_index, table] : tables) {
            const std::vector<InstancePair> matched =
                match_instances(std::move(table), iou_threshold_);
            auto& s = stats[static_cast<std::size_t>(class_index)];
            for (const InstancePair& pair : matched) {
                ++s.tp;
                s.iou_sum += pair.iou;
                ++matched_pred[class_index];
                ++matched_gt[class_index];
                matches_[t].push_back(MatchedInstance{set_index, pair.pred_id, pair.gt_id,
                                                      class_index, pair.iou});
            }
        }
        for (const auto& [id, info] : frame.pred) {
            (void)id;
            auto& s = stats[static_cast<std::size_t>(info.class_index)];
            s.seen = true;
        }
        for (const auto& [id, info] : frame.gt) {
            (void)id;
            auto& s = stats[static_cast<std::size_t>(info.class_index)];
            s.seen = true;
        }
        // Unmatched instances become false positives / false negatives.
        std::map<int, std::uint64_t> pred_totals;
        std::map<int, std::uint64_t> gt_totals;
        for (const auto& [id, info] : frame.pred) {
            (void)id;
            ++pred_totals[info.class_index];
        }
        for (const auto& [id, info] : frame.gt) {
            (void)id;
            ++gt_totals[info.class_index];
        }
        for (const auto& [class_index, count] : pred_totals) {
            stats[static_cast<std::size_t>(class_index)].fp +=
                count - matched_pred[class_index];
        }
        for (const auto& [class_index, count] : gt_totals) {
            stats[static_cast<std::size_t>(class_index)].fn +=
                count - matched_gt[class_index];
        }
    }
}

RayPQReport RayPQAccumulator::report() const {
    RayPQReport report;
    report.empty = !any_gt_instances_;
    double pq_mean_sum = 0.0;
    for (std::size_t t = 0; t < thresholds_.size(); ++t) {
        RayPQThresholdBlock block;
        block.tau = thresholds_[t];
        block.per_class.assign(num_classes_, std::nullopt);
        block.matches = matches_[t];
        double pq_sum = 0.0, sq_sum = 0.0, rq_sum = 0.0;
        std::size_t present = 0;
        for (std::size_t c = 0; c < num_classes_; ++c) {
            const ClassStats& s = stats_[t][c];
            if (!s.seen) {
                continue;
            }
            RayPQClassBlock cb;
            cb.tp = s.tp;
            cb.fp = s.fp;
            cb.fn = s.fn;
            cb.sq = s.tp > 0 ? s.iou_sum / static_cast<double>(s.tp) : 0.0;
            const double rq_denom = static_cast<double>(s.tp) +
                                    0.5 * static_cast<double>(s.fp) +
                                    0.5 * static_cast<double>(s.fn);
            cb.rq = rq_denom > 0.0 ? static_cast<double>(s.tp) / rq_denom : 0.0;
            cb.pq = cb.sq * cb.rq;
            pq_sum += cb.pq;
            sq_sum += cb.sq;
            rq_sum += cb.rq;
            ++present;
            block.per_class[c] = cb;
        }
        if (present > 0) {
            block.mean_pq = pq_sum / static_cast<double>(present);
            block.mean_sq = sq_sum / static_cast<double>(present);
            block.mean_rq = rq_sum / static_cast<double>(present);
        }
        pq_mean_sum += block.mean_pq;
        report.per_threshold.push_back(std::move(block));
    }
    report.raypq =
        report.empty ? 0.0 : pq_mean_sum / static_cast<double>(thresholds_.size());
    return report;
}

RayPQReport raypq(std::span<const RayEvalSample> samples,
                  const std::vector<double>& thresholds, const ClassTaxonomy& taxonomy,
                  double iou_threshold) {
    RayPQAccumulator acc(taxonomy, thresholds, iou_threshold);
    acc.add_sample_set(samples);
    return acc.report();
}

}  // namespace occray
