// Class taxonomy: ordered semantic class names plus the index of the "free"
// (unoccupied) class. Labels stored in grids index into this table.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace occray {

class ClassTaxonomy {
public:
    // Throws std::invalid_argument if names is empty, exceeds 256 entries
    // (labels are stored as one byte), contains duplicates, or free_index is
    // out of range.
    ClassTaxonomy(std::vector<std::string> names, std::size_t free_index);

    // The 17 nuScenes semantic classes plus "free" (index 17).
    static ClassTaxonomy nuscenes();

    // Indices of the eight instance-forming ("thing") classes of the default
    // taxonomy: car, truck, construction_vehicle, bus, trailer, motorcycle,
    // bicycle, pedestrian.
    static std::vector<int> nuscenes_thing_classes();

    std::size_t size() const noexcept { return names_.size(); }
    std::size_t free_index() const noexcept { return free_index_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(std::size_t c) const { return names_.at(c); }
    bool is_semantic(std::size_t c) const noexcept { return c != free_index_; }
    std::optional<std::size_t> index_of(std::string_view name) const noexcept;

    bool operator==(const ClassTaxonomy&) const = default;

private:
    std::vector<std::string> names_;
    std::size_t free_index_;
};

}  // namespace occray
