#include <algorithm>
#include <cmath>

#include "rebrick/env.hpp"

namespace rebrick {

namespace {

// Footprint extents along x/y after applying the orientation.
std::pair<int, int> oriented_footprint(const BrickType& t, int orientation) {
    return orientation == 0 ? std::pair{t.footprint_w, t.footprint_d}
                            : std::pair{t.footprint_d, t.footprint_w};
}

} // namespace

bool predicate_boundary(const Action& a, const EnvState& s, const BrickCatalog& catalog,
                        const MaskConfig& cfg) {
    // Exhaustive L1 test, equivalent to X passes of 6-direction dilation.
    const std::vector<Cell> brick = cells_of(BrickInstance{a.type_id, a.x, a.y, a.z,
                                                           a.orientation}, catalog);
    const std::vector<Cell> tar = s.v_tar.occupied_cells();
    for (const Cell& c : brick) {
        if (!s.v_tar.in_bounds(c.x, c.y, c.z)) return false;
        bool inside = false;
        for (const Cell& t : tar) {
            if (std::abs(c.x - t.x) + std::abs(c.y - t.y) + std::abs(c.z - t.z) <=
                cfg.boundary_tol) {
                inside = true;
                break;
            }
        }
        if (!inside) return false;
    }
    return true;
}

bool predicate_collision(const Action& a, const EnvState& s, const BrickCatalog& catalog) {
    for (const Cell& c : cells_of(BrickInstance{a.type_id, a.x, a.y, a.z, a.orientation},
                                  catalog)) {
        if (!s.v_cur.in_bounds(c.x, c.y, c.z)) return false;
        if (s.v_cur.at(c.x, c.y, c.z)) return false;
    }
    return true;
}

bool predicate_inventory(const Action& a, const EnvState& s) {
    return s.inventory.count(a.type_id) > 0;
}

bool predicate_hooking(const Action& a, const EnvState& s, const BrickCatalog& catalog) {
    if (a.z == 0) return true;  // baseplate counts as support
    for (const Cell& c : cells_of(BrickInstance{a.type_id, a.x, a.y, a.z, a.orientation},
                                  catalog)) {
        if (s.v_cur.in_bounds(c.x, c.y, c.z - 1) && s.v_cur.at(c.x, c.y, c.z - 1))
            return true;
        if (s.v_cur.in_bounds(c.x, c.y, c.z + 1) && s.v_cur.at(c.x, c.y, c.z + 1))
            return true;
    }
    return false;
}

bool predicate_similarity(const Action& a, const EnvState& s, const BrickCatalog& catalog,
                          const SimilarityConfig& sim_cfg, const MaskConfig& mask_cfg) {
    const double s_cur =
        s.v_cur.empty() ? 0.0 : combined_similarity(s.v_cur, s.v_tar, sim_cfg);

    VoxelGrid with_brick = s.v_cur;
    for (const Cell& c : cells_of(BrickInstance{a.type_id, a.x, a.y, a.z, a.orientation},
                                  catalog)) {
        if (!with_brick.in_bounds(c.x, c.y, c.z)) return false;
        with_brick.set(c.x, c.y, c.z, true);
    }
    return combined_similarity(with_brick, s.v_tar, sim_cfg) > s_cur + mask_cfg.sim_tolerance;
}

std::vector<uint8_t> dilated_target(const VoxelGrid& v_tar, int tol) {
    std::vector<uint8_t> allowed(static_cast<size_t>(v_tar.volume()), 0);
    std::vector<int32_t> frontier;
    for (int32_t id : v_tar.occupied_indices()) {
        allowed[id] = 1;
        frontier.push_back(id);
    }
    std::vector<int32_t> next;
    for (int pass = 0; pass < tol; ++pass) {
        next.clear();
        for (int32_t id : frontier) {
            const Cell c = v_tar.cell_of(id);
            const Cell nbrs[6] = {{c.x - 1, c.y, c.z}, {c.x + 1, c.y, c.z},
                                  {c.x, c.y - 1, c.z}, {c.x, c.y + 1, c.z},
                                  {c.x, c.y, c.z - 1}, {c.x, c.y, c.z + 1}};
            for (const Cell& nb : nbrs) {
                if (!v_tar.in_bounds(nb.x, nb.y, nb.z)) continue;
                const int32_t ni = v_tar.index_of(nb.x, nb.y, nb.z);
                if (!allowed[ni]) {
                    allowed[ni] = 1;
                    next.push_back(ni);
                }
            }
        }
        frontier.swap(next);
    }
    return allowed;
}

// Shared enumeration behind compute_mask and the env's cached path. The
// similarity predicate is evaluated exactly per surviving candidate via the
// canonical-order contexts, so bits match the from-scratch oracle.
ActionMask compute_mask_with_contexts(const EnvState& s, const BrickCatalog& catalog,
                                      const SimilarityConfig& sim_cfg,
                                      const MaskConfig& mask_cfg,
                                      const simx::TargetContext& tar,
                                      const simx::CurrentContext& cur,
                                      const std::vector<uint8_t>& allowed) {
    const ActionSpace space{s.v_cur.h(), s.v_cur.w(), s.v_cur.d(), catalog.size()};
    ActionMask mask;
    mask.bits.assign(static_cast<size_t>(space.size()), 0);

    const double s_cur = cur.cur_cells.empty() ? 0.0 : simx::eval_current(tar, cur, sim_cfg);
    const double bar = s_cur + mask_cfg.sim_tolerance;

    const VoxelGrid& grid = s.v_cur;
    std::vector<int32_t> cells;
    for (int type_id = 0; type_id < catalog.size(); ++type_id) {
        if (s.inventory.count(type_id) <= 0) continue;
        const BrickType& t = catalog.at(type_id);
        for (int orientation = 0; orientation < 2; ++orientation) {
            if (orientation == 1 && mask_cfg.dedupe_square_orientations &&
                t.footprint_w == t.footprint_d)
                continue;
            const auto [fx, fy] = oriented_footprint(t, orientation);
            for (int x = 0; x + fx <= space.h; ++x) {
                for (int y = 0; y + fy <= space.w; ++y) {
                    for (int z = 0; z < space.d; ++z) {
                        bool ok = true;
                        bool hooked = z == 0;
                        for (int i = 0; ok && i < fx; ++i) {
                            for (int j = 0; ok && j < fy; ++j) {
                                const int32_t id = grid.index_of(x + i, y + j, z);
                                if (!allowed[id] || grid.at(id)) {
                                    ok = false;
                                    break;
                                }
                                if (!hooked) {
                                    // z >= 1 here, so id-1 is the cell below.
                                    if (grid.at(id - 1)) hooked = true;
                                    if (z + 1 < space.d && grid.at(id + 1)) hooked = true;
                                }
                            }
                        }
                        if (!ok || !hooked) continue;

                        cells.clear();
                        for (int i = 0; i < fx; ++i)
                            for (int j = 0; j < fy; ++j)
                                cells.push_back(grid.index_of(x + i, y + j, z));
                        std::sort(cells.begin(), cells.end());
                        if (simx::eval_with_cells(tar, cur, cells, sim_cfg) > bar) {
                            const int64_t idx = space.index_of(
                                Action{type_id, x, y, z, orientation});
                            mask.bits[static_cast<size_t>(idx)] = 1;
                            ++mask.valid_count;
                        }
                    }
                }
            }
        }
    }
    return mask;
}

ActionMask compute_mask(const EnvState& s, const BrickCatalog& catalog,
                        const SimilarityConfig& sim_cfg, const MaskConfig& mask_cfg) {
    sim_cfg.validate();
    mask_cfg.validate();
    const simx::TargetContext tar = simx::TargetContext::build(s.v_tar);
    const simx::CurrentContext cur = simx::CurrentContext::build(s.v_cur, tar);
    const std::vector<uint8_t> allowed = dilated_target(s.v_tar, mask_cfg.boundary_tol);
    return compute_mask_with_contexts(s, catalog, sim_cfg, mask_cfg, tar, cur, allowed);
}

ActionMask brute_force_mask(const EnvState& s, const BrickCatalog& catalog,
                            const SimilarityConfig& sim_cfg, const MaskConfig& mask_cfg) {
    sim_cfg.validate();
    mask_cfg.validate();
    const ActionSpace space{s.v_cur.h(), s.v_cur.w(), s.v_cur.d(), catalog.size()};
    ActionMask mask;
    mask.bits.assign(static_cast<size_t>(space.size()), 0);
    for (int64_t i = 0; i < space.size(); ++i) {
        const Action a = space.decode(i);
        if (a.orientation == 1 && mask_cfg.dedupe_square_orientations &&
            catalog.is_square(a.type_id))
            continue;
        if (!predicate_inventory(a, s)) continue;
        if (!predicate_boundary(a, s, catalog, mask_cfg)) continue;
        if (!predicate_collision(a, s, catalog)) continue;
        if (!predicate_hooking(a, s, catalog)) continue;
        if (!predicate_similarity(a, s, catalog, sim_cfg, mask_cfg)) continue;
        mask.bits[static_cast<size_t>(i)] = 1;
        ++mask.valid_count;
    }
    return mask;
}

} // namespace rebrick
