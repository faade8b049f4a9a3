#include "occray/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace occray {

RayClassification classify_ray(const RayEvalSample& sample, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("classify_ray: tau must be positive and finite");
    }
    RayClassification out;
    if (!sample.gt.is_hit()) {
        out.verdict = RayVerdict::excluded;
        return out;
    }
    const Hit& gt = sample.gt.hit;
    out.gt_class = gt.class_index;
    if (!sample.pred.is_hit()) {
        out.verdict = RayVerdict::false_negative;
        return out;
    }
    const Hit& pred = sample.pred.hit;
    if (pred.class_index == gt.class_index &&
        std::abs(pred.distance - gt.distance) <= tau) {
        out.verdict = RayVerdict::true_positive;
        return out;
    }
    out.verdict = RayVerdict::false_negative_positive;
    out.pred_class = pred.class_index;
    return out;
}

RayIoUAccumulator::RayIoUAccumulator(const ClassTaxonomy& taxonomy,
                                     std::vector<double> thresholds)
    : free_index_(taxonomy.free_index()), thresholds_(std::move(thresholds)) {
    if (thresholds_.empty()) {
        throw std::invalid_argument("rayiou: at least one depth threshold required");
    }
    for (double tau : thresholds_) {
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            throw std::invalid_argument("rayiou: thresholds must be positive and finite");
        }
    }
    counts_.assign(thresholds_.size(), std::vector<ClassCounts>(taxonomy.size()));
}

void RayIoUAccumulator::add(const RayEvalSample& sample) {
    ++total_;
    if (!sample.gt.is_hit()) {
        ++excluded_;
        return;
    }
    for (std::size_t t = 0; t < thresholds_.size(); ++t) {
        const RayClassification c = classify_ray(sample, thresholds_[t]);
        auto& counts = counts_[t];
        switch (c.verdict) {
            case RayVerdict::true_positive:
                ++counts[static_cast<std::size_t>(c.gt_class)].tp;
                break;
            case RayVerdict::false_negative:
                ++counts[static_cast<std::size_t>(c.gt_class)].fn;
                break;
            case RayVerdict::false_negative_positive:
                ++counts[static_cast<std::size_t>(c.gt_class)].fn;
                ++counts[static_cast<std::size_t>(c.pred_class)].fp;
                break;
            case RayVerdict::excluded:
                break;
        }
    }
}

void RayIoUAccumulator::add(std::span<const RayEvalSample> samples) {
    for (const auto& sample : samples) {
        add(sample);
    }
}

RayIoUReport RayIoUAccumulator::report() const {
    RayIoUReport report;
    report.rays_total = total_;
    report.rays_excluded = excluded_;
    report.empty = (total_ == excluded_);

    double threshold_mean_sum = 0.0;
    for (std::size_t t = 0; t < thresholds_.size(); ++t) {
        RayIoUThresholdBlock block;
        block.tau = thresholds_[t];
        block.per_class = counts_[t];
        block.iou.assign(block.per_class.size(), std::nullopt);
        double iou_sum = 0.0;
        std::size_t defined = 0;
        for (std::size_t c = 0; c < block.per_class.size(); ++c) {
            if (c == free_index_) {
                continue;
            }
            const ClassCounts& counts = block.per_class[c];
            if (counts.total() == 0) {
                continue;
            }
            const double iou = static_cast<double>(counts.tp) /
                               static_cast<double>(counts.total());
            block.iou[c] = iou;
            iou_sum += iou;
            ++defined;
        }
        block.mean_iou = defined > 0 ? iou_sum / static_cast<double>(defined) : 0.0;
        threshold_mean_sum += block.mean_iou;
        report.per_threshold.push_back(std::move(block));
    }
    report.rayiou =
        report.empty ? 0.0 : threshold_mean_sum / static_cast<double>(thresholds_.size());
    return report;
}

RayIoUReport rayiou(std::span<const RayEvalSample> samples,
                    const std::vector<double>& thresholds, const ClassTaxonomy& taxonomy) {
    RayIoUAccumulator acc(taxonomy, thresholds);
    acc.add(samples);
    return acc.report();
}

void accumulate_voxel_confusion(VoxelConfusion& confusion, const VoxelGrid& pred,
                                const VoxelGrid& gt,
                                std::span<const std::uint8_t> visible_mask) {
    if (!pred.same_geometry(gt)) {
        throw std::invalid_argument("voxel_miou: prediction and ground truth grids "
                                    "have different geometry");
    }
    if (pred.taxonomy() != gt.taxonomy()) {
        throw std::invalid_argument("voxel_miou: prediction and ground truth grids "
                                    "have different taxonomies");
    }
    if (confusion.intersection.size() != gt.taxonomy().size()) {
        throw std::invalid_argument("voxel_miou: confusion sized for a different taxonomy");
    }
    if (!visible_mask.empty() && visible_mask.size() != gt.voxel_count()) {
        throw std::invalid_argument("voxel_miou: visible mask size does not match grid");
    }
    const auto pred_labels = pred.labels();
    const auto gt_labels = gt.labels();
    const auto free = static_cast<std::uint8_t>(gt.taxonomy().free_index());
    for (std::size_t i = 0; i < gt_labels.size(); ++i) {
        if (!visible_mask.empty() && visible_mask[i] == 0) {
            continue;
        }
        const std::uint8_t p = pred_labels[i];
        const std::uint8_t g = gt_labels[i];
        if (p == g) {
            if (p != free) {
                ++confusion.intersection[p];
                ++confusion.union_count[p];
            }
        } else {
            if (p != free) {
                ++confusion.union_count[p];
            }
            if (g != free) {
                ++confusion.union_count[g];
            }
        }
    }
}

VoxelMIoUReport voxel_miou_from(const VoxelConfusion& confusion,
                                const ClassTaxonomy& taxonomy) {
    VoxelMIoUReport report;
    report.per_class.assign(taxonomy.size(), std::nullopt);
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < taxonomy.size(); ++c) {
        if (!taxonomy.is_semantic(c) || confusion.union_count[c] == 0) {
            continue;
        }
        const double iou = static_cast<double>(confusion.intersection[c]) /
                           static_cast<double>(confusion.union_count[c]);
        report.per_class[c] = iou;
        sum += iou;
        ++present;
    }
    report.empty = (present == 0);
    report.mean_iou = report.empty ? 0.0 : sum / static_cast<double>(present);
    return report;
}

VoxelMIoUReport voxel_miou(const VoxelGrid& pred, const VoxelGrid& gt,
                           std::span<const std::uint8_t> visible_mask) {
    VoxelConfusion confusion(gt.taxonomy().size());
    accumulate_voxel_confusion(confusion, pred, gt, visible_mask);
    return voxel_miou_from(confusion, gt.taxonomy());
}

}  // namespace occray
