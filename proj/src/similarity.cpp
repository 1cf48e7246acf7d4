#include "rebrick/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rebrick {

namespace {

inline int64_t sq_dist(const Cell& a, const Cell& b) {
    const int64_t dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

std::vector<Cell> decode_all(const VoxelGrid& grid, const std::vector<int32_t>& ids) {
    std::vector<Cell> cells;
    cells.reserve(ids.size());
    for (int32_t id : ids) cells.push_back(grid.cell_of(id));
    return cells;
}

} // namespace

double feature_similarity_stats(const GridStats& a, const GridStats& b) {
    const double cc_max = static_cast<double>(std::max(a.components, b.components));
    const double rho_a = density_of(a), rho_b = density_of(b);
    const double rho_max = std::max(rho_a, rho_b);
    if (cc_max <= 0 || rho_max <= 0)
        throw EmptyInputError("feature similarity needs non-empty grids");
    const double s_comp = 1.0 - std::abs(a.components - b.components) / cc_max;
    const double s_dens = 1.0 - std::abs(rho_a - rho_b) / rho_max;
    return 0.5 * (s_comp + s_dens);
}

double feature_similarity(const VoxelGrid& a, const VoxelGrid& b) {
    if (a.empty() || b.empty()) throw EmptyInputError("feature similarity of empty grid");
    return feature_similarity_stats(grid_stats(a), grid_stats(b));
}

double grid_chamfer(const VoxelGrid& a, const VoxelGrid& b) {
    if (a.empty() || b.empty()) throw EmptyInputError("chamfer of empty grid");
    const std::vector<Cell> cells_a = a.occupied_cells();
    const std::vector<Cell> cells_b = b.occupied_cells();

    double sum_ab = 0.0;
    for (const Cell& ca : cells_a) {
        int64_t best = std::numeric_limits<int64_t>::max();
        for (const Cell& cb : cells_b) best = std::min(best, sq_dist(ca, cb));
        sum_ab += std::sqrt(static_cast<double>(best));
    }
    double sum_ba = 0.0;
    for (const Cell& cb : cells_b) {
        int64_t best = std::numeric_limits<int64_t>::max();
        for (const Cell& ca : cells_a) best = std::min(best, sq_dist(cb, ca));
        sum_ba += std::sqrt(static_cast<double>(best));
    }
    return 0.5 * (sum_ab / static_cast<double>(cells_a.size()) +
                  sum_ba / static_cast<double>(cells_b.size()));
}

double combined_from_parts(double chamfer, const GridStats& a, const GridStats& b,
                           const SimilarityConfig& cfg) {
    return cfg.alpha * std::exp(-chamfer) + cfg.beta * feature_similarity_stats(a, b);
}

double combined_similarity(const VoxelGrid& a, const VoxelGrid& b,
                           const SimilarityConfig& cfg) {
    cfg.validate();
    if (a.empty() || b.empty()) throw EmptyInputError("combined similarity of empty grid");
    return combined_from_parts(grid_chamfer(a, b), grid_stats(a), grid_stats(b), cfg);
}

double scom_percent(double scom, const SimilarityConfig& cfg) {
    return 100.0 * scom / (cfg.alpha + cfg.beta);
}

namespace simx {

TargetContext TargetContext::build(const VoxelGrid& v_tar) {
    if (v_tar.empty()) throw EmptyInputError("target grid has no occupied cells");
    TargetContext ctx;
    ctx.h = v_tar.h();
    ctx.w = v_tar.w();
    ctx.d = v_tar.d();
    ctx.tar_cells = v_tar.occupied_indices();
    ctx.stats = grid_stats(v_tar);

    const std::vector<Cell> tar_coords = decode_all(v_tar, ctx.tar_cells);
    ctx.dist_to_tar.resize(static_cast<size_t>(v_tar.volume()));
    for (int x = 0; x < ctx.h; ++x)
        for (int y = 0; y < ctx.w; ++y)
            for (int z = 0; z < ctx.d; ++z) {
                const Cell c{x, y, z};
                int64_t best = std::numeric_limits<int64_t>::max();
                for (const Cell& t : tar_coords) best = std::min(best, sq_dist(c, t));
                ctx.dist_to_tar[v_tar.index_of(x, y, z)] =
                    std::sqrt(static_cast<double>(best));
            }
    return ctx;
}

CurrentContext CurrentContext::build(const VoxelGrid& v_cur, const TargetContext& tar) {
    CurrentContext ctx;
    ctx.cur_cells = v_cur.occupied_indices();
    ctx.labels = connected_component_labels(v_cur);
    ctx.stats = grid_stats(v_cur);
    ctx.refresh_bounds(v_cur);

    const std::vector<Cell> cur_coords = decode_all(v_cur, ctx.cur_cells);
    ctx.minsq_to_cur.assign(tar.tar_cells.size(), std::numeric_limits<int32_t>::max());
    for (size_t t = 0; t < tar.tar_cells.size(); ++t) {
        const Cell tc = v_cur.cell_of(tar.tar_cells[t]);
        int64_t best = std::numeric_limits<int32_t>::max();
        for (const Cell& c : cur_coords) best = std::min(best, sq_dist(tc, c));
        ctx.minsq_to_cur[t] = static_cast<int32_t>(best);
    }
    return ctx;
}

void CurrentContext::refresh_bounds(const VoxelGrid& v_cur) {
    min_x = min_y = min_z = std::numeric_limits<int>::max();
    max_x = max_y = max_z = std::numeric_limits<int>::min();
    for (int32_t id : cur_cells) {
        const Cell c = v_cur.cell_of(id);
        min_x = std::min(min_x, c.x); max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y); max_y = std::max(max_y, c.y);
        min_z = std::min(min_z, c.z); max_z = std::max(max_z, c.z);
    }
}

void CurrentContext::add_cells(const std::vector<int32_t>& cells, const TargetContext& tar,
                               const VoxelGrid& v_cur_after) {
    std::vector<int32_t> merged;
    merged.reserve(cur_cells.size() + cells.size());
    std::merge(cur_cells.begin(), cur_cells.end(), cells.begin(), cells.end(),
               std::back_inserter(merged));
    cur_cells = std::move(merged);

    std::vector<Cell> new_coords = decode_all(v_cur_after, cells);
    for (size_t t = 0; t < tar.tar_cells.size(); ++t) {
        const Cell tc = v_cur_after.cell_of(tar.tar_cells[t]);
        int64_t best = minsq_to_cur[t];
        for (const Cell& c : new_coords) best = std::min(best, sq_dist(tc, c));
        minsq_to_cur[t] = static_cast<int32_t>(best);
    }

    labels = connected_component_labels(v_cur_after);
    stats = grid_stats(v_cur_after);
    refresh_bounds(v_cur_after);
}

double eval_current(const TargetContext& tar, const CurrentContext& cur,
                    const SimilarityConfig& cfg) {
    if (cur.cur_cells.empty()) throw EmptyInputError("current grid has no occupied cells");
    double sum_ab = 0.0;
    for (int32_t id : cur.cur_cells) sum_ab += tar.dist_to_tar[id];
    double sum_ba = 0.0;
    for (int32_t m : cur.minsq_to_cur) sum_ba += std::sqrt(static_cast<double>(m));
    const double chamfer = 0.5 * (sum_ab / static_cast<double>(cur.cur_cells.size()) +
                                  sum_ba / static_cast<double>(tar.tar_cells.size()));
    return combined_from_parts(chamfer, cur.stats, tar.stats, cfg);
}

double eval_with_cells(const TargetContext& tar, const CurrentContext& cur,
                       const std::vector<int32_t>& brick_cells,
                       const SimilarityConfig& cfg) {
    const int d = tar.d, w = tar.w;
    auto cell_of = [&](int32_t id) {
        return Cell{static_cast<int>(id / (static_cast<int64_t>(d) * w)),
                    static_cast<int>((id / d) % w), static_cast<int>(id % d)};
    };

    // a -> tar sum over the deduped union, ascending id order.
    double sum_ab = 0.0;
    size_t n_union = 0;
    {
        size_t i = 0, j = 0;
        while (i < cur.cur_cells.size() || j < brick_cells.size()) {
            int32_t id;
            if (j >= brick_cells.size() ||
                (i < cur.cur_cells.size() && cur.cur_cells[i] <= brick_cells[j])) {
                id = cur.cur_cells[i];
                if (j < brick_cells.size() && brick_cells[j] == id) ++j;  // overlap
                ++i;
            } else {
                id = brick_cells[j];
                ++j;
            }
            sum_ab += tar.dist_to_tar[id];
            ++n_union;
        }
    }

    // tar -> a sum with the brick folded into the per-target minima.
    std::vector<Cell> brick_coords;
    brick_coords.reserve(brick_cells.size());
    for (int32_t id : brick_cells) brick_coords.push_back(cell_of(id));

    double sum_ba = 0.0;
    for (size_t t = 0; t < tar.tar_cells.size(); ++t) {
        const Cell tc = cell_of(tar.tar_cells[t]);
        int64_t best = cur.minsq_to_cur[t];
        for (const Cell& c : brick_coords) best = std::min(best, sq_dist(tc, c));
        sum_ba += std::sqrt(static_cast<double>(best));
    }

    const double chamfer = 0.5 * (sum_ab / static_cast<double>(n_union) +
                                  sum_ba / static_cast<double>(tar.tar_cells.size()));

    // Component count: the brick is one connected block; it fuses every
    // distinct component it touches or overlaps.
    std::vector<int32_t> distinct;
    auto note_label = [&](int32_t lbl) {
        if (lbl < 0) return;
        for (int32_t seen : distinct)
            if (seen == lbl) return;
        distinct.push_back(lbl);
    };
    int min_x = std::numeric_limits<int>::max(), max_x = std::numeric_limits<int>::min();
    int min_y = min_x, max_y = max_x, min_z = min_x, max_z = max_x;
    for (const Cell& c : brick_coords) {
        min_x = std::min(min_x, c.x); max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y); max_y = std::max(max_y, c.y);
        min_z = std::min(min_z, c.z); max_z = std::max(max_z, c.z);
        const int32_t id = (static_cast<int32_t>(c.x) * w + c.y) * d + c.z;
        note_label(cur.labels.label.empty() ? -1 : cur.labels.label[id]);
        const Cell nbrs[6] = {{c.x - 1, c.y, c.z}, {c.x + 1, c.y, c.z},
                              {c.x, c.y - 1, c.z}, {c.x, c.y + 1, c.z},
                              {c.x, c.y, c.z - 1}, {c.x, c.y, c.z + 1}};
        for (const Cell& nb : nbrs) {
            if (nb.x < 0 || nb.x >= tar.h || nb.y < 0 || nb.y >= tar.w || nb.z < 0 ||
                nb.z >= tar.d)
                continue;
            const int32_t ni = (static_cast<int32_t>(nb.x) * w + nb.y) * d + nb.z;
            note_label(cur.labels.label.empty() ? -1 : cur.labels.label[ni]);
        }
    }

    GridStats union_stats;
    union_stats.components = cur.stats.components - static_cast<int>(distinct.size()) + 1;
    union_stats.occupied = static_cast<int64_t>(n_union);
    if (cur.stats.occupied > 0) {
        min_x = std::min(min_x, cur.min_x); max_x = std::max(max_x, cur.max_x);
        min_y = std::min(min_y, cur.min_y); max_y = std::max(max_y, cur.max_y);
        min_z = std::min(min_z, cur.min_z); max_z = std::max(max_z, cur.max_z);
    }
    union_stats.bbox_volume = static_cast<int64_t>(max_x - min_x + 1) *
                              (max_y - min_y + 1) * (max_z - min_z + 1);

    return combined_from_parts(chamfer, union_stats, tar.stats, cfg);
}

} // namespace simx

} // namespace rebrick
