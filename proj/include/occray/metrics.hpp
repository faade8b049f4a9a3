// Ray-level and voxel-level evaluation metrics.
//
// A query ray is cast into both grids; the pair of first-hit records is one
// evaluation sample. Rays the ground truth misses are excluded entirely. A
// ray is a true positive for class c when both hits carry class c and the
// hit distances differ by at most the depth threshold tau; otherwise it
// produces a false negative for the ground-truth class and, if the
// prediction hit something, a false positive for the predicted class.
#pragma once

#include "occray/raycast.hpp"
#include "occray/taxonomy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace occray {

struct RayEvalSample {
    CastResult gt;
    CastResult pred;
};

enum class RayVerdict : std::uint8_t {
    true_positive,
    false_negative,           // ground truth hit, prediction missed
    false_negative_positive,  // both hit but class or depth disagrees
    excluded,                 // ground truth missed
};

struct RayClassification {
    RayVerdict verdict = RayVerdict::excluded;
    int gt_class = -1;    // class charged a false negative (or the TP class)
    int pred_class = -1;  // class charged a false positive
};

// Invalid-ray entries are treated as misses. Throws std::invalid_argument on
// a non-positive tau.
RayClassification classify_ray(const RayEvalSample& sample, double tau);

struct ClassCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn; }
};

struct RayIoUThresholdBlock {
    double tau = 0.0;
    std::vector<ClassCounts> per_class;          // indexed by class
    std::vector<std::optional<double>> iou;      // nullopt when tp+fp+fn == 0
    double mean_iou = 0.0;                       // over classes with counts
};

struct RayIoUReport {
    std::vector<RayIoUThresholdBlock> per_threshold;
    double rayiou = 0.0;  // mean of the per-threshold means, 0 when empty
    std::uint64_t rays_total = 0;
    std::uint64_t rays_excluded = 0;
    bool empty = false;  // no ray survived exclusion
};

// Streaming accumulator so multiple frames can be pooled before the division
// (micro-averaging). Accumulation order does not affect the result.
class RayIoUAccumulator {
public:
    // Thresholds must be non-empty and positive.
    RayIoUAccumulator(const ClassTaxonomy& taxonomy, std::vector<double> thresholds);

    void add(const RayEvalSample& sample);
    void add(std::span<const RayEvalSample> samples);

    RayIoUReport report() const;

private:
    std::size_t free_index_;
    std::vector<double> thresholds_;
    std::vector<std::vector<ClassCounts>> counts_;  // [threshold][class]
    std::uint64_t total_ = 0;
    std::uint64_t excluded_ = 0;
};

// Single-shot evaluation of one sample list.
RayIoUReport rayiou(std::span<const RayEvalSample> samples,
                    const std::vector<double>& thresholds, const ClassTaxonomy& taxonomy);

// Per-class intersection and union voxel counts, poolable across frames.
struct VoxelConfusion {
    std::vector<std::uint64_t> intersection;
    std::vector<std::uint64_t> union_count;

    explicit VoxelConfusion(std::size_t num_classes)
        : intersection(num_classes, 0), union_count(num_classes, 0) {}
};

// Accumulates voxel-level agreement between two grids of identical geometry
// and taxonomy. When visible_mask is non-empty only voxels with mask value 1
// participate. Throws std::invalid_argument on geometry/taxonomy/mask-size
// mismatches.
void accumulate_voxel_confusion(VoxelConfusion& confusion, const VoxelGrid& pred,
                                const VoxelGrid& gt,
                                std::span<const std::uint8_t> visible_mask = {});

struct VoxelMIoUReport {
    std::vector<std::optional<double>> per_class;  // nullopt when class absent
    double mean_iou = 0.0;
    bool empty = false;  // no semantic class present in either grid
};

VoxelMIoUReport voxel_miou_from(const VoxelConfusion& confusion,
                                const ClassTaxonomy& taxonomy);

// Voxel-level mean IoU over the semantic classes present in either grid.
VoxelMIoUReport voxel_miou(const VoxelGrid& pred, const VoxelGrid& gt,
                           std::span<const std::uint8_t> visible_mask = {});

}  // namespace occray
