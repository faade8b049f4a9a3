#include "occray/rays_io.hpp"

#include "binary_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace occray {

namespace {

constexpr char kMagic[4] = {'R', 'A', 'Y', 'S'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_rays(const RaySet& rays, std::ostream& os) {
    using namespace detail;
    put_bytes(os, kMagic, 4);
    put_u32(os, kVersion);
    put_u64(os, rays.rays.size());
    for (const Ray& ray : rays.rays) {
        for (int a = 0; a < 3; ++a) {
            put_f32(os, static_cast<float>(ray.origin[a]));
        }
        for (int a = 0; a < 3; ++a) {
            put_f32(os, static_cast<float>(ray.direction[a]));
        }
        put_u32(os, ray.waypoint_id);
    }
    if (!os) {
        throw std::runtime_error("write_rays: stream write failed");
    }
}

void write_rays(const RaySet& rays, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("write_rays: cannot open " + path.string());
    }
    write_rays(rays, os);
    os.close();
    if (!os) {
        throw std::runtime_error("write_rays: failed writing " + path.string());
    }
}

RaySet read_rays(std::istream& is, const std::string& source_name) {
    using namespace detail;
    const auto fail = [&](const std::string& msg) -> std::runtime_error {
        return std::runtime_error("read_rays: " + msg + " in " + source_name);
    };
    char magic[4];
    get_bytes(is, magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw fail("bad magic (not a RAYS file)");
    }
    const std::uint32_t version = get_u32(is, "version");
    if (version != kVersion) {
        throw fail("unsupported version " + std::to_string(version));
    }
    const std::uint64_t count = get_u64(is, "count");
    RaySet set;
    set.rays.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Ray ray;
        for (int a = 0; a < 3; ++a) {
            ray.origin[a] = get_f32(is, "ray origin");
        }
        for (int a = 0; a < 3; ++a) {
            ray.direction[a] = get_f32(is, "ray direction");
        }
        ray.waypoint_id = get_u32(is, "waypoint id");
        if (!ray.origin.allFinite() || std::abs(ray.direction.norm() - 1.0) > 1e-6) {
            throw fail("ray " + std::to_string(i) + " is malformed");
        }
        set.rays.push_back(ray);
    }
    return set;
}

RaySet read_rays(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("read_rays: cannot open " + path.string());
    }
    return read_rays(is, path.string());
}

}  // namespace occray
