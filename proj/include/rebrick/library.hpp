#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rebrick/registration.hpp"
#include "rebrick/similarity.hpp"
#include "rebrick/voxel.hpp"

namespace rebrick {

struct LibraryEntry {
    std::string name;
    Assembly assembly;
};

// Named complete assemblies. Ingest validates groundedness and unique names;
// entries are kept sorted by name so tie-breaks are lexicographic.
class ObjectLibrary {
public:
    explicit ObjectLibrary(std::vector<LibraryEntry> entries, const BrickCatalog& catalog);

    // Manifest JSON: {"entries":[{"name":"chair","file":"chair.json"},...]};
    // file paths resolve relative to the manifest's directory.
    static ObjectLibrary load(const std::filesystem::path& manifest,
                              const BrickCatalog& catalog);

    const std::vector<LibraryEntry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<LibraryEntry> entries_;
};

// Per-entry outcome of a library query, success or not.
struct EntryScore {
    std::string name;
    bool ok = false;
    double score = 0.0;  // S_com against the incomplete grid; meaningless if !ok
    double scale = 1.0;
    RigidTransform transform;
    double chamfer = 0.0;  // post-alignment grid chamfer
    std::string error;     // failure cause when !ok
    double millis = 0.0;
};

struct MatchResult {
    std::string name;
    double scale = 1.0;
    RigidTransform transform;      // maps the scaled entry cloud into env coordinates
    VoxelGrid aligned_target;      // entry revoxelized at the environment dims
    double score = 0.0;
    std::vector<EntryScore> per_entry;  // every entry, sorted by name
};

// Scale each entry onto the incomplete cloud, register (FPFH + RANSAC + ICP),
// revoxelize at the incomplete grid's dims, and score with S_com. Returns the
// argmax entry; ties break lexicographically by name. Single failing entries
// are reported in per_entry; only an all-fail query throws MatchFailureError.
MatchResult match_library(const VoxelGrid& incomplete, const ObjectLibrary& library,
                          const RegistrationConfig& reg_cfg, const SimilarityConfig& sim_cfg);

} // namespace rebrick
