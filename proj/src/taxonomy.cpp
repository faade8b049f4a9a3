#include "occray/taxonomy.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace occray {

ClassTaxonomy::ClassTaxonomy(std::vector<std::string> names, std::size_t free_index)
    : names_(std::move(names)), free_index_(free_index) {
    if (names_.empty()) {
        throw std::invalid_argument("taxonomy must contain at least one class");
    }
    if (names_.size() > 256) {
        throw std::invalid_argument("taxonomy exceeds 256 classes (labels are one byte)");
    }
    if (free_index_ >= names_.size()) {
        throw std::invalid_argument("taxonomy free_index out of range");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) {
            throw std::invalid_argument("taxonomy contains duplicate class name: " + n);
        }
    }
}

ClassTaxonomy ClassTaxonomy::nuscenes() {
    return ClassTaxonomy(
        {"others", "barrier", "bicycle", "bus", "car", "construction_vehicle",
         "motorcycle", "pedestrian", "traffic_cone", "trailer", "truck",
         "driveable_surface", "other_flat", "sidewalk", "terrain", "manmade",
         "vegetation", "free"},
        17);
}

std::vector<int> ClassTaxonomy::nuscenes_thing_classes() {
    return {4, 10, 5, 3, 9, 6, 2, 7};
}

std::optional<std::size_t> ClassTaxonomy::index_of(std::string_view name) const noexcept {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - names_.begin());
}

}  // namespace occray
