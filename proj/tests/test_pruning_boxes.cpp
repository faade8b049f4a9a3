#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "occray/boxes.hpp"
#include "occray/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace occray;

TEST_CASE("top-k keeps the highest scores with a coordinate tie-break") {
    ScoredVoxelSet set;
    set.entries = {
        {{5, 0, 0}, 0.9}, {{1, 0, 0}, 0.9}, {{0, 0, 0}, 0.1},
        {{2, 0, 0}, 0.7}, {{3, 0, 0}, 0.9},
    };

    const ScoredVoxelSet kept = prune_topk(set, 2);
    REQUIRE(kept.entries.size() == 2);
    // Three entries tie at 0.9; the two smallest coordinates win.
    CHECK(kept.entries[0].coord == Coord{1, 0, 0});
    CHECK(kept.entries[1].coord == Coord{3, 0, 0});

    // Output ordering: score descending, then coordinate ascending.
    const ScoredVoxelSet all = prune_topk(set, 10);
    REQUIRE(all.entries.size() == 5);
    CHECK(all.entries[0].coord == Coord{1, 0, 0});
    CHECK(all.entries[1].coord == Coord{3, 0, 0});
    CHECK(all.entries[2].coord == Coord{5, 0, 0});
    CHECK(all.entries[3].coord == Coord{2, 0, 0});
    CHECK(all.entries[4].coord == Coord{0, 0, 0});

    CHECK_THROWS_AS(prune_topk(set, 0), std::invalid_argument);
}

TEST_CASE("top-k result does not depend on input order") {
    std::mt19937 rng(7);
    ScoredVoxelSet set;
    for (int i = 0; i < 500; ++i) {
        // Deliberately few distinct scores so ties are common.
        set.entries.push_back(
            {{i % 20, (i / 20) % 20, i / 400}, static_cast<double>(rng() % 8)});
    }
    const ScoredVoxelSet a = prune_topk(set, 100);
    std::shuffle(set.entries.begin(), set.entries.end(), rng);
    const ScoredVoxelSet b = prune_topk(set, 100);

    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].coord == b.entries[i].coord);
        CHECK(a.entries[i].score == b.entries[i].score);
    }
}

TEST_CASE("keeping 32000 of a 200x200x16 grid retains 5 percent") {
    const std::size_t total = 200 * 200 * 16;
    ScoredVoxelSet set;
    set.entries.reserve(total);
    std::mt19937_64 rng(11);
    for (int x = 0; x < 200; ++x) {
        for (int y = 0; y < 200; ++y) {
            for (int z = 0; z < 16; ++z) {
                set.entries.push_back(
                    {{x, y, z}, static_cast<double>(rng()) / 1e19});
            }
        }
    }
    const ScoredVoxelSet kept = prune_topk(set, 32000);
    CHECK(kept.entries.size() == 32000);
    CHECK(static_cast<double>(kept.entries.size()) / static_cast<double>(total) ==
          doctest::Approx(0.05).epsilon(1e-12));
    // Everything kept outscores everything dropped.
    const double floor_score = kept.entries.back().score;
    std::size_t higher = 0;
    for (const ScoredVoxel& e : set.entries) {
        higher += e.score > floor_score;
    }
    CHECK(higher <= 32000);
}

TEST_CASE("threshold pruning preserves order and filters by score") {
    ScoredVoxelSet set;
    set.entries = {{{0, 0, 0}, 0.2}, {{1, 0, 0}, 0.8}, {{2, 0, 0}, 0.5}};
    const ScoredVoxelSet kept = prune_threshold(set, 0.5);
    REQUIRE(kept.entries.size() == 2);
    CHECK(kept.entries[0].coord == Coord{1, 0, 0});
    CHECK(kept.entries[1].coord == Coord{2, 0, 0});

    CHECK_THROWS_AS(prune_threshold(set, std::nan("")), std::invalid_argument);
}

TEST_CASE("box containment respects yaw") {
    Box3D box;
    box.center = Vec3(0.0, 0.0, 0.0);
    box.size = Vec3(4.0, 2.0, 2.0);
    box.yaw = std::numbers::pi / 2.0;  // long axis now along y

    CHECK(box_contains(box, Vec3(0.0, 1.9, 0.0)));
    CHECK_FALSE(box_contains(box, Vec3(1.9, 0.0, 0.0)));
    CHECK(box_contains(box, Vec3(0.9, 0.0, 0.0)));
    // Closed faces.
    CHECK(box_contains(box, Vec3(1.0, 2.0, 1.0)));
}

TEST_CASE("instances_from_boxes labels matching voxels only") {
    const ClassTaxonomy tax = ClassTaxonomy::nuscenes();
    VoxelGrid grid({10, 10, 4}, Vec3::Zero(), 1.0, tax);
    for (int x = 2; x < 5; ++x) {
        for (int y = 2; y < 5; ++y) {
            grid.set_label({x, y, 1}, 4);  // car
        }
    }
    grid.set_label({7, 7, 1}, 10);  // a lone truck voxel

    std::vector<Box3D> boxes;
    boxes.push_back({Vec3(3.5, 3.5, 1.5), Vec3(3.0, 3.0, 1.0), 0.0, 4});
    boxes.push_back({Vec3(7.5, 7.5, 1.5), Vec3(1.0, 1.0, 1.0), 0.0, 10});

    const std::vector<std::uint16_t> ids = instances_from_boxes(grid, boxes);
    CHECK(ids[grid.linear_index({3, 3, 1})] == 1);
    CHECK(ids[grid.linear_index({7, 7, 1})] == 2);
    // Free voxels inside a box stay unassigned.
    CHECK(ids[grid.linear_index({3, 3, 2})] == 0);

    SUBCASE("earlier boxes win overlaps") {
        std::vector<Box3D> overlapping = boxes;
        overlapping.push_back({Vec3(3.5, 3.5, 1.5), Vec3(3.0, 3.0, 1.0), 0.0, 4});
        const std::vector<std::uint16_t> again = instances_from_boxes(grid, overlapping);
        CHECK(again[grid.linear_index({3, 3, 1})] == 1);
    }

    SUBCASE("class mismatch leaves voxels unassigned") {
        std::vector<Box3D> wrong = {{Vec3(3.5, 3.5, 1.5), Vec3(3.0, 3.0, 1.0), 0.0, 10}};
        const std::vector<std::uint16_t> none = instances_from_boxes(grid, wrong);
        CHECK(none[grid.linear_index({3, 3, 1})] == 0);
    }

    SUBCASE("invalid boxes are rejected") {
        CHECK_THROWS_AS(
            instances_from_boxes(grid, {{Vec3::Zero(), Vec3(0.0, 1.0, 1.0), 0.0, 4}}),
            std::invalid_argument);
        CHECK_THROWS_AS(
            instances_from_boxes(grid, {{Vec3::Zero(), Vec3(1.0, 1.0, 1.0), 0.0, 17}}),
            std::invalid_argument);
    }
}
