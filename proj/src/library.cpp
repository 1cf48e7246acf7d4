#include "rebrick/library.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>

#include "rebrick/json_io.hpp"
#include "rebrick/rng.hpp"

namespace rebrick {

namespace {

// Rasterize the entry grid under the full similarity transform by pulling
// every environment cell center back through the inverse map. Point splatting
// leaves holes whenever the scale exceeds 1; inverse mapping cannot.
VoxelGrid rasterize_aligned(const VoxelGrid& entry, const Vec3& pivot, double scale,
                            const RigidTransform& t, int h, int w, int d) {
    VoxelGrid out(h, w, d);
    const Mat3 r_inv = t.rotation.transpose();
    for (int x = 0; x < h; ++x)
        for (int y = 0; y < w; ++y)
            for (int z = 0; z < d; ++z) {
                const Vec3 v(x + 0.5, y + 0.5, z + 0.5);
                const Vec3 q = r_inv * (v - t.translation);
                const Vec3 p = pivot + (q - pivot) / scale;
                const int sx = static_cast<int>(std::floor(p.x()));
                const int sy = static_cast<int>(std::floor(p.y()));
                const int sz = static_cast<int>(std::floor(p.z()));
                if (entry.in_bounds(sx, sy, sz) && entry.at(sx, sy, sz))
                    out.set(x, y, z, true);
            }
    return out;
}

// Coordinate-descent polish of the final score around the registered pose.
// Rigid point-to-point ICP between two different-pitch cell lattices settles
// up to half a cell off and cannot correct the PCA scale estimate; probing
// small translation and scale offsets against the real objective fixes both.
struct PolishResult {
    RigidTransform transform;
    double scale = 1.0;
    double score = 0.0;
    VoxelGrid aligned;
};

PolishResult polish_alignment(const VoxelGrid& entry, const Vec3& pivot, double scale,
                              const RigidTransform& init, const VoxelGrid& query,
                              const SimilarityConfig& sim_cfg) {
    PolishResult best;
    best.transform = init;
    best.scale = scale;
    best.aligned = rasterize_aligned(entry, pivot, scale, init, query.h(), query.w(),
                                     query.d());
    best.score = best.aligned.empty()
                     ? -std::numeric_limits<double>::infinity()
                     : combined_similarity(query, best.aligned, sim_cfg);

    auto probe = [&](const RigidTransform& t, double s) {
        const VoxelGrid aligned =
            rasterize_aligned(entry, pivot, s, t, query.h(), query.w(), query.d());
        if (aligned.empty()) return;
        const double score = combined_similarity(query, aligned, sim_cfg);
        if (score > best.score) best = PolishResult{t, s, score, aligned};
    };

    // Translation only: the PCA scale is trustworthy exactly when the entry
    // really is the query's object, and a scale dial would mostly let wrong
    // entries squeeze themselves onto the query.
    const double shifts[4] = {-0.5, -0.25, 0.25, 0.5};
    for (int round = 0; round < 2; ++round) {
        for (int axis = 0; axis < 3; ++axis) {
            const RigidTransform base = best.transform;
            for (double delta : shifts) {
                RigidTransform t = base;
                t.translation[axis] += delta;
                probe(t, best.scale);
            }
        }
    }
    return best;
}

} // namespace

ObjectLibrary::ObjectLibrary(std::vector<LibraryEntry> entries, const BrickCatalog& catalog)
    : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const LibraryEntry& a, const LibraryEntry& b) { return a.name < b.name; });
    std::set<std::string> names;
    for (const LibraryEntry& e : entries_) {
        if (e.name.empty()) throw ConfigError("library entry with empty name");
        if (!names.insert(e.name).second)
            throw ConfigError("duplicate library entry name: " + e.name);
        if (e.assembly.bricks().empty())
            throw ConfigError("library entry " + e.name + " is empty");
        if (!is_grounded(e.assembly, catalog))
            throw ConfigError("library entry " + e.name + " is not grounded");
    }
}

ObjectLibrary ObjectLibrary::load(const std::filesystem::path& manifest,
                                  const BrickCatalog& catalog) {
    const nlohmann::json j = read_json_file(manifest);
    if (!j.contains("entries") || !j["entries"].is_array())
        throw IoError("manifest " + manifest.string() + " lacks an \"entries\" array");
    const std::filesystem::path base = manifest.parent_path();
    std::vector<LibraryEntry> entries;
    for (const auto& e : j["entries"]) {
        if (!e.contains("name") || !e.contains("file"))
            throw IoError("manifest entries need name and file");
        const std::filesystem::path file = base / e["file"].get<std::string>();
        entries.push_back(LibraryEntry{e["name"].get<std::string>(),
                                       assembly_from_json(read_json_file(file), catalog)});
    }
    return ObjectLibrary(std::move(entries), catalog);
}

MatchResult match_library(const VoxelGrid& incomplete, const ObjectLibrary& library,
                          const RegistrationConfig& reg_cfg, const SimilarityConfig& sim_cfg) {
    reg_cfg.validate();
    sim_cfg.validate();
    if (library.empty()) throw MatchFailureError("object library is empty");
    if (incomplete.empty()) throw EmptyInputError("incomplete grid has no occupied cells");

    const PointCloud query = voxel_to_pointcloud(incomplete);
    const std::vector<Vec3> query_normals = estimate_normals(query, reg_cfg);
    const FeatureSet query_features = compute_fpfh(query, query_normals, reg_cfg);

    MatchResult result;
    bool have_best = false;
    for (const LibraryEntry& entry : library.entries()) {
        EntryScore es;
        es.name = entry.name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const PointCloud entry_cloud = voxel_to_pointcloud(entry.assembly.grid());
            const auto [scaled, scale] = pca_scale(query, entry_cloud);
            es.scale = scale;

            const std::vector<Vec3> normals = estimate_normals(scaled, reg_cfg);
            const FeatureSet features = compute_fpfh(scaled, normals, reg_cfg);

            RegistrationConfig entry_cfg = reg_cfg;
            entry_cfg.rng_seed = derive_seed(reg_cfg.rng_seed, fnv1a64(entry.name));
            // Refine every coarse hypothesis; partial overlaps make the raw
            // inlier ranking unreliable, the similarity score is the judge.
            const std::vector<RansacResult> coarse = ransac_align_multi(
                scaled, query, features, query_features, entry_cfg, 8);

            const Vec3 pivot = entry_cloud.centroid();
            bool entry_scored = false;
            RigidTransform entry_best_transform;
            double entry_best_score = 0.0;
            for (const RansacResult& hypothesis : coarse) {
                IcpResult fine;
                try {
                    fine = icp_refine(scaled, query, hypothesis.transform, entry_cfg);
                } catch (const NoOverlapError&) {
                    continue;
                }
                const VoxelGrid aligned =
                    rasterize_aligned(entry.assembly.grid(), pivot, scale, fine.transform,
                                      incomplete.h(), incomplete.w(), incomplete.d());
                if (aligned.empty()) continue;

                const double score = combined_similarity(incomplete, aligned, sim_cfg);
                if (!entry_scored || score > entry_best_score) {
                    entry_best_score = score;
                    entry_best_transform = fine.transform;
                    entry_scored = true;
                }
            }
            if (!entry_scored)
                throw DegenerateGeometryError(
                    "no alignment hypothesis landed inside the grid");

            const PolishResult polished =
                polish_alignment(entry.assembly.grid(), pivot, scale, entry_best_transform,
                                 incomplete, sim_cfg);
            es.score = polished.score;
            es.transform = polished.transform;
            es.scale = polished.scale;
            es.chamfer = grid_chamfer(incomplete, polished.aligned);
            es.ok = true;
            if (!have_best || polished.score > result.score) {
                have_best = true;
                result.name = entry.name;
                result.scale = polished.scale;
                result.transform = polished.transform;
                result.aligned_target = polished.aligned;
                result.score = polished.score;
            }
        } catch (const Error& err) {
            es.ok = false;
            es.error = err.what();
        }
        es.millis = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        result.per_entry.push_back(std::move(es));
    }

    if (!have_best) {
        std::string causes;
        for (const EntryScore& es : result.per_entry)
            causes += "\n  " + es.name + ": " + es.error;
        throw MatchFailureError("every library entry failed registration:" + causes);
    }
    return result;
}

} // namespace rebrick
