#include "occray/voxel_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace occray {

VoxelGrid::VoxelGrid(Coord dims, const Vec3& origin, double voxel_size,
                     ClassTaxonomy taxonomy)
    : dims_(dims), origin_(origin), voxel_size_(voxel_size), taxonomy_(std::move(taxonomy)) {
    if (dims_.x <= 0 || dims_.y <= 0 || dims_.z <= 0) {
        throw std::invalid_argument("grid dims must be positive");
    }
    if (!(voxel_size_ > 0.0) || !std::isfinite(voxel_size_)) {
        throw std::invalid_argument("voxel_size must be positive and finite");
    }
    if (!origin_.allFinite()) {
        throw std::invalid_argument("grid origin must be finite");
    }
    const std::size_t count = static_cast<std::size_t>(dims_.x) *
                              static_cast<std::size_t>(dims_.y) *
                              static_cast<std::size_t>(dims_.z);
    labels_.assign(count, static_cast<std::uint8_t>(taxonomy_.free_index()));
}

void VoxelGrid::set_label(const Coord& c, int class_index) {
    if (!contains(c)) {
        throw std::out_of_range("set_label: coordinate outside grid");
    }
    if (class_index < 0 || static_cast<std::size_t>(class_index) >= taxonomy_.size()) {
        throw std::invalid_argument("set_label: class index outside taxonomy");
    }
    labels_[linear_index(c)] = static_cast<std::uint8_t>(class_index);
}

void VoxelGrid::set_labels(std::vector<std::uint8_t> labels) {
    if (labels.size() != voxel_count()) {
        throw std::invalid_argument("set_labels: size does not match grid");
    }
    for (std::uint8_t v : labels) {
        if (v >= taxonomy_.size()) {
            throw std::invalid_argument("set_labels: label outside taxonomy");
        }
    }
    labels_ = std::move(labels);
}

void VoxelGrid::set_instances(std::vector<std::uint16_t> instances) {
    if (instances.size() != voxel_count()) {
        throw std::invalid_argument("set_instances: size does not match grid");
    }
    const auto free = static_cast<std::uint8_t>(taxonomy_.free_index());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (instances[i] != 0 && labels_[i] == free) {
            throw std::invalid_argument("set_instances: nonzero instance on a free voxel");
        }
    }
    instances_ = std::move(instances);
}

void VoxelGrid::set_visible_mask(std::vector<std::uint8_t> mask) {
    if (mask.size() != voxel_count()) {
        throw std::invalid_argument("set_visible_mask: size does not match grid");
    }
    for (std::uint8_t v : mask) {
        if (v > 1) {
            throw std::invalid_argument("set_visible_mask: values must be 0 or 1");
        }
    }
    visible_ = std::move(mask);
}

std::optional<Coord> VoxelGrid::world_to_voxel(const Vec3& point) const noexcept {
    Coord c;
    int* out[3] = {&c.x, &c.y, &c.z};
    const int dims[3] = {dims_.x, dims_.y, dims_.z};
    for (int a = 0; a < 3; ++a) {
        const double q = (point[a] - origin_[a]) / voxel_size_ + kCellSnapEps;
        const double f = std::floor(q);
        if (f < 0.0 || f >= static_cast<double>(dims[a])) {
            return std::nullopt;
        }
        *out[a] = static_cast<int>(f);
    }
    return c;
}

Vec3 VoxelGrid::voxel_center(const Coord& c) const {
    if (!contains(c)) {
        throw std::out_of_range("voxel_center: coordinate outside grid");
    }
    return origin_ + voxel_size_ * Vec3(c.x + 0.5, c.y + 0.5, c.z + 0.5);
}

bool VoxelGrid::same_geometry(const VoxelGrid& other) const noexcept {
    return dims_ == other.dims_ && origin_ == other.origin_ &&
           voxel_size_ == other.voxel_size_;
}

SparsityStats sparsity_stats(const VoxelGrid& grid) {
    SparsityStats stats;
    stats.class_counts.assign(grid.taxonomy().size(), 0);
    for (std::uint8_t label : grid.labels()) {
        ++stats.class_counts[label];
    }
    stats.free_fraction = static_cast<double>(stats.class_counts[grid.taxonomy().free_index()]) /
                          static_cast<double>(grid.voxel_count());
    return stats;
}

std::vector<double> class_balance_weights(const std::vector<std::uint64_t>& counts) {
    if (counts.empty()) {
        throw std::invalid_argument("class_balance_weights: empty count list");
    }
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) {
        total += c;
    }
    std::vector<double> weights(counts.size(), 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            weights[i] = static_cast<double>(total) / static_cast<double>(counts[i]);
        }
    }
    return weights;
}

}  // namespace occray
