#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "occray/raycast.hpp"
#include "occray/synth.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

using namespace occray;

TEST_CASE("wall scene places the slabs where the distances say") {
    WallSceneSpec spec;  // d=10, d_v=0.4, viewpoint x=0 -> cell 100
    const WallScene scene = make_wall_scene(spec);

    // Front face 10 m ahead of the viewpoint: cells 125 (only, 1 voxel thick).
    CHECK(scene.gt.label(Coord{124, 100, 5}) == static_cast<int>(scene.gt.taxonomy().free_index()));
    CHECK(scene.gt.label(Coord{125, 100, 5}) == spec.wall_class);
    CHECK(scene.gt.label(Coord{126, 100, 5}) == static_cast<int>(scene.gt.taxonomy().free_index()));
    // Spans the full y/z extent.
    CHECK(scene.gt.label(Coord{125, 0, 0}) == spec.wall_class);
    CHECK(scene.gt.label(Coord{125, 199, 15}) == spec.wall_class);
    // Unshifted prediction is identical.
    CHECK(scene.pred.label(Coord{125, 100, 5}) == spec.wall_class);
    CHECK(scene.pred.label(Coord{126, 100, 5}) ==
          static_cast<int>(scene.pred.taxonomy().free_index()));
}

TEST_CASE("shifted and filled predictions cover the documented cells") {
    WallSceneSpec spec;
    spec.shift = -0.8;
    spec.fill_behind = true;
    const WallScene scene = make_wall_scene(spec);
    const int free_class = static_cast<int>(scene.pred.taxonomy().free_index());

    // Front face moves from 10.0 to 9.2 m; fill reaches the ground-truth far
    // face at 10.4 m (shift < 0 leaves the default far bound alone).
    CHECK(scene.pred.label(Coord{122, 100, 5}) == free_class);
    for (int x = 123; x < 126; ++x) {
        CHECK(scene.pred.label(Coord{x, 100, 5}) == spec.wall_class);
    }
    CHECK(scene.pred.label(Coord{126, 100, 5}) == free_class);
    // Ground truth is unaffected by prediction shaping.
    CHECK(scene.gt.label(Coord{125, 100, 5}) == spec.wall_class);
    CHECK(scene.gt.label(Coord{124, 100, 5}) == free_class);
}

TEST_CASE("positive shifts extend the default fill bound") {
    WallSceneSpec spec;
    spec.shift = 0.4;
    spec.fill_behind = true;
    const WallScene scene = make_wall_scene(spec);
    const int free_class = static_cast<int>(scene.pred.taxonomy().free_index());
    // Front face at 10.4; far bound 10 + 0.4 + 0.4 = 10.8 -> exactly cell 126.
    CHECK(scene.pred.label(Coord{125, 100, 5}) == free_class);
    CHECK(scene.pred.label(Coord{126, 100, 5}) == spec.wall_class);
    CHECK(scene.pred.label(Coord{127, 100, 5}) == free_class);
}

TEST_CASE("wall scene rejects distances off the voxel lattice") {
    WallSceneSpec spec;
    spec.d = 10.1;
    CHECK_THROWS_AS(make_wall_scene(spec), std::invalid_argument);

    spec = WallSceneSpec{};
    spec.d_v = 0.3;
    CHECK_THROWS_AS(make_wall_scene(spec), std::invalid_argument);

    spec = WallSceneSpec{};
    spec.shift = 0.15;
    CHECK_THROWS_AS(make_wall_scene(spec), std::invalid_argument);

    spec = WallSceneSpec{};
    spec.wall_class = 17;  // the free class cannot form a wall
    CHECK_THROWS_AS(make_wall_scene(spec), std::invalid_argument);

    spec = WallSceneSpec{};
    spec.d = 100.0;  // beyond the +x extent
    CHECK_THROWS_AS(make_wall_scene(spec), std::invalid_argument);
}

TEST_CASE("thickening keeps every pattern ray's first hit") {
    WallSceneSpec spec;
    spec.shift = -0.4;
    spec.fill_behind = false;
    const WallScene scene = make_wall_scene(spec);

    std::vector<Vec3> pattern;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    for (int i = 0; i < 500; ++i) {
        Vec3 d(std::abs(g(rng)) + 0.05, g(rng) * 0.4, g(rng) * 0.1);
        pattern.push_back(d.normalized());
    }

    const VoxelGrid thick = thicken_behind(scene.pred, spec.viewpoint, pattern);

    std::size_t filled = 0;
    for (std::size_t i = 0; i < thick.voxel_count(); ++i) {
        filled += !thick.is_free(i);
    }
    std::size_t original = 0;
    for (std::size_t i = 0; i < scene.pred.voxel_count(); ++i) {
        original += !scene.pred.is_free(i);
    }
    CHECK(filled > original);  // the hack really does add matter

    for (const Vec3& dir : pattern) {
        const CastResult before = cast_ray(scene.pred, spec.viewpoint, dir, 80.0);
        const CastResult after = cast_ray(thick, spec.viewpoint, dir, 80.0);
        REQUIRE(before.kind == after.kind);
        if (before.is_hit()) {
            CHECK(before.hit.coord == after.hit.coord);
            CHECK(before.hit.distance == after.hit.distance);
            CHECK(before.hit.class_index == after.hit.class_index);
        }
    }
}

TEST_CASE("instance scenes are deterministic and non-overlapping") {
    const InstanceScene a = make_instance_scene(42, 5);
    const InstanceScene b = make_instance_scene(42, 5);
    const InstanceScene c = make_instance_scene(43, 5);

    REQUIRE(a.boxes.size() == 5);
    CHECK(std::vector<std::uint8_t>(a.gt.labels().begin(), a.gt.labels().end()) ==
          std::vector<std::uint8_t>(b.gt.labels().begin(), b.gt.labels().end()));
    CHECK(std::vector<std::uint8_t>(a.gt.labels().begin(), a.gt.labels().end()) !=
          std::vector<std::uint8_t>(c.gt.labels().begin(), c.gt.labels().end()));

    // Every box produced voxels carrying its id, class matches, and no voxel
    // carries an id without its box's class.
    REQUIRE(a.gt.has_instances());
    std::set<std::uint16_t> ids_seen;
    for (int x = 0; x < a.gt.dims().x; ++x) {
        for (int y = 0; y < a.gt.dims().y; ++y) {
            for (int z = 0; z < a.gt.dims().z; ++z) {
                const Coord coord{x, y, z};
                const std::uint16_t id = a.gt.instance(coord);
                if (id == 0) {
                    continue;
                }
                ids_seen.insert(id);
                REQUIRE(id <= a.boxes.size());
                CHECK(a.gt.label(coord) == a.boxes[id - 1].class_index);
                CHECK(box_contains(a.boxes[id - 1], a.gt.voxel_center(coord)));
            }
        }
    }
    CHECK(ids_seen.size() == a.boxes.size());

    // Top layers stay free for downward test rays.
    const InstanceSceneConfig config;
    for (int x = 0; x < a.gt.dims().x; ++x) {
        for (int y = 0; y < a.gt.dims().y; ++y) {
            for (int z = a.gt.dims().z - config.top_margin; z < a.gt.dims().z; ++z) {
                CHECK(a.gt.is_free(a.gt.linear_index({x, y, z})));
            }
        }
    }
}

TEST_CASE("instance scene classes come from the thing list") {
    const InstanceScene scene = make_instance_scene(7, 6);
    const std::vector<int> things = ClassTaxonomy::nuscenes_thing_classes();
    for (const Box3D& box : scene.boxes) {
        CHECK(std::count(things.begin(), things.end(), box.class_index) == 1);
    }
}

TEST_CASE("impossible packings fail with the seed in the message") {
    InstanceSceneConfig config;
    config.dims = {4, 4, 4};
    config.origin = Vec3::Zero();
    config.top_margin = 3;
    config.min_extent = 3;
    config.max_extent = 3;
    CHECK_THROWS_WITH_AS(make_instance_scene(123, 50, config),
                         doctest::Contains("123"), std::runtime_error);
}
