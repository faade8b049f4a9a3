// Score-based sparsification of voxel candidate sets.
#pragma once

#include "occray/geometry.hpp"

#include <cstddef>
#include <vector>

namespace occray {

struct ScoredVoxel {
    Coord coord;
    double score = 0.0;
};

// A set of candidate voxels with occupancy scores. Coordinates are expected
// to be unique and scores finite.
struct ScoredVoxelSet {
    std::vector<ScoredVoxel> entries;
};

// Keeps the min(k, |set|) highest-scoring entries; score ties are broken
// toward the smaller (x, y, z) coordinate, i.e. the smaller linear index.
// Result is ordered by descending score, then ascending coordinate.
// Throws std::invalid_argument if k is zero.
ScoredVoxelSet prune_topk(const ScoredVoxelSet& set, std::size_t k);

// Keeps entries with score >= theta, preserving input order.
// Throws std::invalid_argument on a non-finite theta.
ScoredVoxelSet prune_threshold(const ScoredVoxelSet& set, double theta);

}  // namespace occray
