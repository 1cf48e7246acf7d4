#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rebrick/voxel.hpp"

namespace rebrick {

// Voxel JSON: {"dims":[h,w,d],"occupied":[[x,y,z],...]}
nlohmann::json voxel_to_json(const VoxelGrid& grid);
VoxelGrid voxel_from_json(const nlohmann::json& j);

// Assembly JSON: {"dims":[h,w,d],"bricks":[{"type":i,"pos":[x,y,z],"orient":0|1},...]}
nlohmann::json assembly_to_json(const Assembly& assembly);
Assembly assembly_from_json(const nlohmann::json& j, const BrickCatalog& catalog);

nlohmann::json inventory_to_json(const Inventory& inv);
Inventory inventory_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);

// Write-to-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace rebrick
