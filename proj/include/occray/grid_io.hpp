// OCCG v1 binary occupancy-grid files (little-endian):
//   magic "OCCG", version u32 = 1,
//   W u32, H u32, D u32, origin 3 x f32, voxel_size f32,
//   flags u32 (bit 0: instance channel present, bit 1: visible mask present),
//   class count u32, then per class name: length u16 + UTF-8 bytes,
//   free class index u32,
//   labels W*H*D x u8 (z fastest),
//   instances W*H*D x u16 when flag bit 0,
//   visible mask W*H*D x u8 (0/1) when flag bit 1.
#pragma once

#include "occray/voxel_grid.hpp"

#include <filesystem>
#include <iosfwd>

namespace occray {

void write_occg(const VoxelGrid& grid, std::ostream& os);
// Throws std::runtime_error (naming the path) on I/O failure.
void write_occg(const VoxelGrid& grid, const std::filesystem::path& path);

// Rejects unknown magic or version and malformed payloads with
// std::runtime_error.
VoxelGrid read_occg(std::istream& is, const std::string& source_name = "stream");
VoxelGrid read_occg(const std::filesystem::path& path);

}  // namespace occray
