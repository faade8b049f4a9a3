#include "occray/grid_io.hpp"

#include "binary_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace occray {

namespace {

constexpr char kMagic[4] = {'O', 'C', 'C', 'G'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kFlagInstances = 1u << 0;
constexpr std::uint32_t kFlagVisible = 1u << 1;
// Caps W*H*D so a corrupted header cannot trigger a huge allocation.
constexpr std::uint64_t kMaxVoxels = 1ull << 31;

}  // namespace

void write_occg(const VoxelGrid& grid, std::ostream& os) {
    using namespace detail;
    put_bytes(os, kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(grid.dims().x));
    put_u32(os, static_cast<std::uint32_t>(grid.dims().y));
    put_u32(os, static_cast<std::uint32_t>(grid.dims().z));
    for (int a = 0; a < 3; ++a) {
        put_f32(os, static_cast<float>(grid.origin()[a]));
    }
    put_f32(os, static_cast<float>(grid.voxel_size()));
    std::uint32_t flags = 0;
    if (grid.has_instances()) {
        flags |= kFlagInstances;
    }
    if (grid.has_visible_mask()) {
        flags |= kFlagVisible;
    }
    put_u32(os, flags);
    const auto& tax = grid.taxonomy();
    put_u32(os, static_cast<std::uint32_t>(tax.size()));
    for (const auto& name : tax.names()) {
        if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
            throw std::runtime_error("write_occg: class name longer than 65535 bytes");
        }
        put_u16(os, static_cast<std::uint16_t>(name.size()));
        put_bytes(os, name.data(), name.size());
    }
    put_u32(os, static_cast<std::uint32_t>(tax.free_index()));
    put_bytes(os, grid.labels().data(), grid.labels().size());
    if (grid.has_instances()) {
        for (std::uint16_t id : grid.instances()) {
            put_u16(os, id);
        }
    }
    if (grid.has_visible_mask()) {
        put_bytes(os, grid.visible_mask().data(), grid.visible_mask().size());
    }
    if (!os) {
        throw std::runtime_error("write_occg: stream write failed");
    }
}

void write_occg(const VoxelGrid& grid, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("write_occg: cannot open " + path.string());
    }
    write_occg(grid, os);
    os.close();
    if (!os) {
        throw std::runtime_error("write_occg: failed writing " + path.string());
    }
}

VoxelGrid read_occg(std::istream& is, const std::string& source_name) {
    using namespace detail;
    const auto fail = [&](const std::string& msg) -> std::runtime_error {
        return std::runtime_error("read_occg: " + msg + " in " + source_name);
    };

    char magic[4];
    get_bytes(is, magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw fail("bad magic (not an OCCG file)");
    }
    const std::uint32_t version = get_u32(is, "version");
    if (version != kVersion) {
        throw fail("unsupported version " + std::to_string(version));
    }
    const std::uint32_t w = get_u32(is, "dims");
    const std::uint32_t h = get_u32(is, "dims");
    const std::uint32_t d = get_u32(is, "dims");
    if (w == 0 || h == 0 || d == 0 ||
        static_cast<std::uint64_t>(w) * h * d > kMaxVoxels) {
        throw fail("invalid grid dimensions");
    }
    Vec3 origin;
    for (int a = 0; a < 3; ++a) {
        origin[a] = get_f32(is, "origin");
    }
    const float voxel_size = get_f32(is, "voxel_size");
    if (!(voxel_size > 0.0f) || !std::isfinite(voxel_size)) {
        throw fail("invalid voxel_size");
    }
    const std::uint32_t flags = get_u32(is, "flags");
    if ((flags & ~(kFlagInstances | kFlagVisible)) != 0) {
        throw fail("unknown flag bits");
    }
    const std::uint32_t class_count = get_u32(is, "class count");
    if (class_count == 0 || class_count > 256) {
        throw fail("invalid class count");
    }
    std::vector<std::string> names(class_count);
    for (auto& name : names) {
        const std::uint16_t len = get_u16(is, "class name length");
        name.resize(len);
        if (len > 0) {
            get_bytes(is, name.data(), len, "class name");
        }
    }
    const std::uint32_t free_index = get_u32(is, "free index");
    if (free_index >= class_count) {
        throw fail("free index out of range");
    }

    VoxelGrid grid(Coord{static_cast<int>(w), static_cast<int>(h), static_cast<int>(d)},
                   origin, voxel_size, ClassTaxonomy(std::move(names), free_index));
    const std::size_t count = grid.voxel_count();

    std::vector<std::uint8_t> labels(count);
    get_bytes(is, labels.data(), count, "labels");
    try {
        grid.set_labels(std::move(labels));
    } catch (const std::invalid_argument& e) {
        throw fail(e.what());
    }
    if (flags & kFlagInstances) {
        std::vector<std::uint16_t> instances(count);
        for (auto& id : instances) {
            id = get_u16(is, "instances");
        }
        try {
            grid.set_instances(std::move(instances));
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
    }
    if (flags & kFlagVisible) {
        std::vector<std::uint8_t> mask(count);
        get_bytes(is, mask.data(), count, "visible mask");
        try {
            grid.set_visible_mask(std::move(mask));
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
    }
    return grid;
}

VoxelGrid read_occg(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("read_occg: cannot open " + path.string());
    }
    return read_occg(is, path.string());
}

}  // namespace occray
