// Measures ray-casting throughput on a randomly occupied default-sized grid.
// Usage: cast_bench [rays] [threads] [occupancy]
#include "occray/raycast.hpp"
#include "occray/raygen.hpp"
#include "occray/taxonomy.hpp"
#include "occray/voxel_grid.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

int main(int argc, char** argv) {
    const std::size_t n_rays = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 500000;
    const unsigned threads = argc > 2 ? static_cast<unsigned>(std::atoi(argv[2])) : 1;
    const double occupancy = argc > 3 ? std::atof(argv[3]) : 0.05;

    occray::VoxelGrid grid({200, 200, 16}, {-40.0, -40.0, -1.0}, 0.4,
                           occray::ClassTaxonomy::nuscenes());
    std::mt19937_64 rng(12345);
    const std::size_t occupied =
        static_cast<std::size_t>(occupancy * static_cast<double>(grid.voxel_count()));
    for (std::size_t i = 0; i < occupied; ++i) {
        const occray::Coord c{static_cast<int>(rng() % 200),
                              static_cast<int>(rng() % 200),
                              static_cast<int>(rng() % 16)};
        grid.set_label(c, static_cast<int>(rng() % 17));
    }

    occray::RaySet rays;
    rays.rays.reserve(n_rays);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (rays.rays.size() < n_rays) {
        occray::Vec3 dir(unit(rng), unit(rng), unit(rng));
        if (dir.squaredNorm() < 1e-6) {
            continue;
        }
        dir.normalize();
        rays.rays.push_back({occray::Vec3(unit(rng) * 30.0, unit(rng) * 30.0, 1.0),
                             dir, 0});
    }

    const auto start = std::chrono::steady_clock::now();
    const auto results = occray::cast_batch(grid, rays, occray::kDefaultMaxRange, threads);
    const auto stop = std::chrono::steady_clock::now();

    std::size_t hits = 0;
    for (const auto& r : results) {
        hits += r.is_hit();
    }
    const double seconds = std::chrono::duration<double>(stop - start).count();
    std::cout << n_rays << " rays, " << threads << " thread(s): " << seconds << " s, "
              << static_cast<std::size_t>(static_cast<double>(n_rays) / seconds)
              << " rays/s, " << hits << " hits\n";
    return 0;
}
