#include "occray/raycast.hpp"

#include <stdexcept>
#include <thread>

namespace occray {

namespace {

enum class RayCheck { ok, bad_direction, bad_origin, bad_range };

RayCheck check_ray(const Vec3& origin, const Vec3& direction, double max_range) {
    if (!origin.allFinite()) {
        return RayCheck::bad_origin;
    }
    const double norm = direction.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
        return RayCheck::bad_direction;
    }
    if (!(max_range > 0.0)) {
        return RayCheck::bad_range;
    }
    return RayCheck::ok;
}

void throw_ray_error(RayCheck check) {
    switch (check) {
        case RayCheck::bad_origin:
            throw std::invalid_argument("cast_ray: origin must be finite");
        case RayCheck::bad_direction:
            throw std::invalid_argument("cast_ray: direction must have unit norm");
        case RayCheck::bad_range:
            throw std::invalid_argument("cast_ray: max_range must be positive");
        case RayCheck::ok:
            break;
    }
}

CastResult cast_unchecked(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                          double max_range) {
    CastResult result = CastResult::make_miss();
    traverse_grid(grid, origin, direction, max_range,
                  [&](const Coord& cell, double t_entry) {
                      const std::size_t idx = grid.linear_index(cell);
                      if (grid.is_free(idx)) {
                          return true;
                      }
                      Hit hit;
                      hit.distance = t_entry;
                      hit.coord = cell;
                      hit.class_index = grid.label(idx);
                      hit.instance_id =
                          grid.has_instances() ? grid.instances()[idx] : 0;
                      result = CastResult::make_hit(hit);
                      return false;
                  });
    return result;
}

}  // namespace

CastResult cast_ray(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                    double max_range) {
    const RayCheck check = check_ray(origin, direction, max_range);
    if (check != RayCheck::ok) {
        throw_ray_error(check);
    }
    return cast_unchecked(grid, origin, direction, max_range);
}

std::vector<CastResult> cast_batch(const VoxelGrid& grid, const RaySet& rays,
                                   double max_range, unsigned threads) {
    if (!(max_range > 0.0)) {
        throw std::invalid_argument("cast_batch: max_range must be positive");
    }
    std::vector<CastResult> results(rays.rays.size());
    const auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Ray& ray = rays.rays[i];
            if (check_ray(ray.origin, ray.direction, max_range) != RayCheck::ok) {
                results[i] = CastResult::make_invalid();
            } else {
                results[i] = cast_unchecked(grid, ray.origin, ray.direction, max_range);
            }
        }
    };

    const std::size_t n = rays.rays.size();
    if (threads <= 1 || n < 2) {
        run_range(0, n);
        return results;
    }
    const std::size_t worker_count = std::min<std::size_t>(threads, n);
    const std::size_t chunk = (n + worker_count - 1) / worker_count;
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) {
            break;
        }
        workers.emplace_back(run_range, lo, hi);
    }
    for (auto& worker : workers) {
        worker.join();
    }
    return results;
}

CastResult oracle_march(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                        double max_range, double step) {
    const RayCheck check = check_ray(origin, direction, max_range);
    if (check != RayCheck::ok) {
        throw_ray_error(check);
    }
    if (!(step > 0.0) || step > grid.voxel_size() / 4.0) {
        throw std::invalid_argument(
            "oracle_march: step must satisfy 0 < step <= voxel_size / 4");
    }
    const auto samples = static_cast<std::uint64_t>(std::floor(max_range / step));
    for (std::uint64_t i = 0; i <= samples; ++i) {
        const double t = static_cast<double>(i) * step;
        const Vec3 point = origin + t * direction;
        const auto cell = grid.world_to_voxel(point);
        if (!cell) {
            continue;  // outside the grid; later samples may re-enter
        }
        const std::size_t idx = grid.linear_index(*cell);
        if (!grid.is_free(idx)) {
            Hit hit;
            hit.distance = t;
            hit.coord = *cell;
            hit.class_index = grid.label(idx);
            hit.instance_id = grid.has_instances() ? grid.instances()[idx] : 0;
            return CastResult::make_hit(hit);
        }
    }
    return CastResult::make_miss();
}

}  // namespace occray
