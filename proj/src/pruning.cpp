#include "occray/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occray {

namespace {

bool ranks_before(const ScoredVoxel& a, const ScoredVoxel& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.coord < b.coord;
}

}  // namespace

ScoredVoxelSet prune_topk(const ScoredVoxelSet& set, std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("prune_topk: k must be at least 1");
    }
    ScoredVoxelSet out;
    out.entries = set.entries;
    if (k >= out.entries.size()) {
        std::sort(out.entries.begin(), out.entries.end(), ranks_before);
        return out;
    }
    std::nth_element(out.entries.begin(), out.entries.begin() + k, out.entries.end(),
                     ranks_before);
    out.entries.resize(k);
    std::sort(out.entries.begin(), out.entries.end(), ranks_before);
    return out;
}

ScoredVoxelSet prune_threshold(const ScoredVoxelSet& set, double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("prune_threshold: theta must be finite");
    }
    ScoredVoxelSet out;
    for (const auto& e : set.entries) {
        if (e.score >= theta) {
            out.entries.push_back(e);
        }
    }
    return out;
}

}  // namespace occray
