// Dense semantic occupancy grid with optional per-voxel instance IDs and an
// optional visibility mask. Storage is row-major with z fastest:
// index(x, y, z) = (x * H + y) * D + z.
#pragma once

#include "occray/geometry.hpp"
#include "occray/taxonomy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace occray {

// Points within this fraction of a cell of a boundary plane are treated as
// lying on it; boundary points resolve to the higher-index cell (half-open
// [min, max) cells). Keeps voxelization stable when coordinates that are
// exact multiples of voxel_size round below the boundary in floating point.
inline constexpr double kCellSnapEps = 1e-9;

class VoxelGrid {
public:
    // Throws std::invalid_argument on non-positive dims or voxel_size, or a
    // non-finite origin. Labels start out all-free.
    VoxelGrid(Coord dims, const Vec3& origin, double voxel_size, ClassTaxonomy taxonomy);

    const Coord& dims() const noexcept { return dims_; }
    const Vec3& origin() const noexcept { return origin_; }
    double voxel_size() const noexcept { return voxel_size_; }
    const ClassTaxonomy& taxonomy() const noexcept { return taxonomy_; }

    std::size_t voxel_count() const noexcept { return labels_.size(); }
    bool contains(const Coord& c) const noexcept {
        return c.x >= 0 && c.x < dims_.x && c.y >= 0 && c.y < dims_.y && c.z >= 0 &&
               c.z < dims_.z;
    }
    std::size_t linear_index(const Coord& c) const noexcept {
        return (static_cast<std::size_t>(c.x) * dims_.y + static_cast<std::size_t>(c.y)) *
                   dims_.z +
               static_cast<std::size_t>(c.z);
    }

    int label(const Coord& c) const { return labels_[linear_index(c)]; }
    int label(std::size_t index) const { return labels_[index]; }
    bool is_free(std::size_t index) const {
        return labels_[index] == static_cast<std::uint8_t>(taxonomy_.free_index());
    }
    // Throws std::out_of_range / std::invalid_argument on bad coordinate or class.
    void set_label(const Coord& c, int class_index);
    std::span<const std::uint8_t> labels() const noexcept { return labels_; }
    // Replaces all labels; throws if the size or any value is invalid.
    void set_labels(std::vector<std::uint8_t> labels);

    bool has_instances() const noexcept { return !instances_.empty(); }
    std::uint16_t instance(const Coord& c) const { return instances_[linear_index(c)]; }
    std::span<const std::uint16_t> instances() const noexcept { return instances_; }
    // Throws on size mismatch or a nonzero ID on a free voxel.
    void set_instances(std::vector<std::uint16_t> instances);
    void clear_instances() noexcept { instances_.clear(); }

    bool has_visible_mask() const noexcept { return !visible_.empty(); }
    bool visible(const Coord& c) const { return visible_[linear_index(c)] != 0; }
    std::span<const std::uint8_t> visible_mask() const noexcept { return visible_; }
    // Throws on size mismatch or values other than 0/1.
    void set_visible_mask(std::vector<std::uint8_t> mask);
    void clear_visible_mask() noexcept { visible_.clear(); }

    Vec3 min_bound() const noexcept { return origin_; }
    Vec3 max_bound() const noexcept {
        return origin_ + voxel_size_ * Vec3(dims_.x, dims_.y, dims_.z);
    }

    // Maps a world point to the voxel containing it (cells are half-open:
    // a point exactly on a shared face belongs to the higher-index cell).
    // Returns nullopt for points outside the grid bounds.
    std::optional<Coord> world_to_voxel(const Vec3& point) const noexcept;

    // World-space center of a voxel. Throws std::out_of_range if the
    // coordinate is outside the grid.
    Vec3 voxel_center(const Coord& c) const;

    // Exact equality of dims, origin and voxel_size.
    bool same_geometry(const VoxelGrid& other) const noexcept;

private:
    Coord dims_;
    Vec3 origin_;
    double voxel_size_;
    ClassTaxonomy taxonomy_;
    std::vector<std::uint8_t> labels_;
    std::vector<std::uint16_t> instances_;
    std::vector<std::uint8_t> visible_;
};

// Per-class voxel counts and the fraction of voxels labeled free.
struct SparsityStats {
    std::vector<std::uint64_t> class_counts;
    double free_fraction = 0.0;
};

SparsityStats sparsity_stats(const VoxelGrid& grid);

// Inverse-frequency class weights: w_c = (sum of all counts) / count_c, and 0
// for classes with no voxels. Throws std::invalid_argument on an empty list.
std::vector<double> class_balance_weights(const std::vector<std::uint64_t>& counts);

}  // namespace occray
