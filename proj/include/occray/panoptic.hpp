// Panoptic quality over query rays. An instance is the set of non-excluded
// rays whose first hit carries its ID (ID 0 means "no instance"). A ray is
// matched between a prediction/ground-truth instance pair when classes
// coincide and the hit depths differ by at most tau; pairs with ray-set
// IoU > 0.5 are necessarily one-to-one and become true positives.
#pragma once

#include "occray/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace occray {

// IoU between the ray set of prediction instance `pred_instance` and ground
// truth instance `gt_instance`: |matched| / (|pred rays| + |gt rays| -
// |matched|). Unknown IDs (or ID 0) give 0. Throws on a non-positive tau.
double ray_instance_iou(std::span<const RayEvalSample> samples,
                        std::uint32_t pred_instance, std::uint32_t gt_instance,
                        double tau);

struct InstancePair {
    std::uint32_t pred_id = 0;
    std::uint32_t gt_id = 0;
    double iou = 0.0;
};

// Selects every pair with iou > iou_threshold. With a threshold of at least
// 0.5 such pairs are provably node-disjoint, so greedy selection is already
// optimal; a table violating disjointness is rejected with
// std::invalid_argument. Result is sorted by (pred_id, gt_id).
std::vector<InstancePair> match_instances(std::vector<InstancePair> table,
                                          double iou_threshold = 0.5);

struct MatchedInstance {
    std::size_t sample_set = 0;  // index of the frame the match came from
    std::uint32_t pred_id = 0;
    std::uint32_t gt_id = 0;
    int class_index = -1;
    double iou = 0.0;
};

struct RayPQClassBlock {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    double sq = 0.0;  // mean matched IoU
    double rq = 0.0;  // tp / (tp + fp/2 + fn/2)
    double pq = 0.0;  // sq * rq
};

struct RayPQThresholdBlock {
    double tau = 0.0;
    std::vector<std::optional<RayPQClassBlock>> per_class;  // set when instances seen
    std::vector<MatchedInstance> matches;
    double mean_pq = 0.0;
    double mean_sq = 0.0;
    double mean_rq = 0.0;
};

struct RayPQReport {
    std::vector<RayPQThresholdBlock> per_threshold;
    double raypq = 0.0;  // mean of the per-threshold mean PQ values
    bool empty = false;  // ground truth exposed no instances to the rays
};

// Pools instance matching statistics over frames: matching runs within each
// frame, counts and matched IoUs accumulate across frames before the final
// quotients.
class RayPQAccumulator {
public:
    RayPQAccumulator(const ClassTaxonomy& taxonomy, std::vector<double> thresholds,
                     double iou_threshold = 0.5);

    void add_sample_set(std::span<const RayEvalSample> samples);

    RayPQReport report() const;

private:
    struct ClassStats {
        std::uint64_t tp = 0;
        std::uint64_t fp = 0;
        std::uint64_t fn = 0;
        double iou_sum = 0.0;
        bool seen = false;
    };

    std::size_t num_classes_;
    std::vector<double> thresholds_;
    double iou_threshold_;
    std::vector<std::vector<ClassStats>> stats_;  // [threshold][class]
    std::vector<std::vector<MatchedInstance>> matches_;  // [threshold]
    std::size_t sample_sets_ = 0;
    bool any_gt_instances_ = false;
};

// Single-frame evaluation.
RayPQReport raypq(std::span<const RayEvalSample> samples,
                  const std::vector<double>& thresholds, const ClassTaxonomy& taxonomy,
                  double iou_threshold = 0.5);

}  // namespace occray
