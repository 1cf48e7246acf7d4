#pragma once

#include <cstdint>
#include <vector>

#include "rebrick/voxel.hpp"

namespace rebrick {

// Weights for the geometric (alpha) and structural (beta) terms.
struct SimilarityConfig {
    double alpha = 0.5;
    double beta = 0.5;

    void validate() const {
        if (alpha < 0 || beta < 0 || alpha + beta <= 0)
            throw ConfigError("similarity weights must be >= 0 and not both zero");
    }
};

// Mean of the component-count and density agreement terms, each in [0,1].
double feature_similarity_stats(const GridStats& a, const GridStats& b);
double feature_similarity(const VoxelGrid& a, const VoxelGrid& b);

// Chamfer between the two grids' cell-center clouds. Squared center-to-center
// distances are integers, so per-cell nearest distances are exact; sums run in
// row-major cell order, which keeps the value reproducible bit-for-bit across
// the incremental and from-scratch evaluation paths.
double grid_chamfer(const VoxelGrid& a, const VoxelGrid& b);

double combined_from_parts(double chamfer, const GridStats& a, const GridStats& b,
                           const SimilarityConfig& cfg);

// alpha * exp(-chamfer) + beta * feature similarity. Throws EmptyInputError
// when either grid has no occupied cells.
double combined_similarity(const VoxelGrid& a, const VoxelGrid& b,
                           const SimilarityConfig& cfg);

// User-facing scale: percentage of the maximum attainable score (alpha+beta).
double scom_percent(double scom, const SimilarityConfig& cfg);

namespace simx {

// Exact-evaluation contexts for scoring many hypothetical single-brick
// additions against a fixed target grid. Every quantity that feeds the score
// is either an integer or a double derived from integers in a fixed order, so
// results are bit-identical to combined_similarity on the materialized union.

struct TargetContext {
    std::vector<int32_t> tar_cells;   // ascending linear indices
    std::vector<double> dist_to_tar;  // per grid cell: distance to nearest target cell
    GridStats stats;
    int h = 0, w = 0, d = 0;

    static TargetContext build(const VoxelGrid& v_tar);
};

struct CurrentContext {
    std::vector<int32_t> cur_cells;    // ascending linear indices
    std::vector<int32_t> minsq_to_cur; // per target cell: min squared distance, INT32_MAX if empty
    ComponentLabels labels;
    GridStats stats;
    // Tight bounds of the occupied set; meaningful only when stats.occupied > 0.
    int min_x = 0, max_x = -1, min_y = 0, max_y = -1, min_z = 0, max_z = -1;

    static CurrentContext build(const VoxelGrid& v_cur, const TargetContext& tar);
    // Fold k freshly placed cells in (cells must be ascending, disjoint from cur).
    void add_cells(const std::vector<int32_t>& cells, const TargetContext& tar,
                   const VoxelGrid& v_cur_after);
    void refresh_bounds(const VoxelGrid& v_cur);
};

// S_com(v_cur, v_tar) via the contexts; equals combined_similarity exactly.
double eval_current(const TargetContext& tar, const CurrentContext& cur,
                    const SimilarityConfig& cfg);

// S_com(v_cur ∪ brick_cells, v_tar). brick_cells ascending; overlap with
// occupied cells is tolerated (union semantics).
double eval_with_cells(const TargetContext& tar, const CurrentContext& cur,
                       const std::vector<int32_t>& brick_cells,
                       const SimilarityConfig& cfg);

} // namespace simx

} // namespace rebrick
