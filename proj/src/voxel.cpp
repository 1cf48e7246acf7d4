#include "rebrick/voxel.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace rebrick {

BrickCatalog::BrickCatalog(std::vector<BrickType> bricks) : bricks_(std::move(bricks)) {
    for (size_t i = 0; i < bricks_.size(); ++i) {
        const BrickType& b = bricks_[i];
        if (b.id != static_cast<int>(i))
            throw CatalogError("catalog ids must be dense, got id " + std::to_string(b.id) +
                               " at slot " + std::to_string(i));
        if (b.footprint_w < 1 || b.footprint_d < 1 || b.height != 1)
            throw CatalogError("bad footprint for brick " + b.name);
    }
}

BrickCatalog BrickCatalog::standard() {
    std::vector<BrickType> b = {
        {0, 1, 1, 1, "1x1"}, {1, 1, 2, 1, "1x2"}, {2, 1, 4, 1, "1x4"},
        {3, 1, 6, 1, "1x6"}, {4, 1, 8, 1, "1x8"}, {5, 2, 2, 1, "2x2"},
        {6, 2, 4, 1, "2x4"}, {7, 2, 6, 1, "2x6"},
    };
    return BrickCatalog(std::move(b));
}

BrickCatalog BrickCatalog::standard_prefix(int n) {
    BrickCatalog full = standard();
    if (n < 1 || n > full.size())
        throw CatalogError("standard catalog prefix must be in [1,8], got " + std::to_string(n));
    std::vector<BrickType> b(full.bricks_.begin(), full.bricks_.begin() + n);
    return BrickCatalog(std::move(b));
}

const BrickType& BrickCatalog::at(int type_id) const {
    if (type_id < 0 || type_id >= size())
        throw CatalogError("unknown brick type " + std::to_string(type_id));
    return bricks_[type_id];
}

bool BrickCatalog::is_square(int type_id) const {
    const BrickType& b = at(type_id);
    return b.footprint_w == b.footprint_d;
}

VoxelGrid::VoxelGrid(int h, int w, int d) : h_(h), w_(w), d_(d) {
    if (h < 1 || w < 1 || d < 1)
        throw ShapeError("grid dims must be positive");
    occ_.assign(static_cast<size_t>(volume()), 0);
}

void VoxelGrid::set(int32_t index, bool occupied) {
    uint8_t& cell = occ_[index];
    if (cell && !occupied) --count_;
    if (!cell && occupied) ++count_;
    cell = occupied ? 1 : 0;
}

void VoxelGrid::set(int x, int y, int z, bool occupied) { set(index_of(x, y, z), occupied); }

std::vector<int32_t> VoxelGrid::occupied_indices() const {
    std::vector<int32_t> out;
    out.reserve(count_);
    for (int32_t i = 0; i < static_cast<int32_t>(occ_.size()); ++i)
        if (occ_[i]) out.push_back(i);
    return out;
}

std::vector<Cell> VoxelGrid::occupied_cells() const {
    std::vector<Cell> out;
    out.reserve(count_);
    for (int x = 0; x < h_; ++x)
        for (int y = 0; y < w_; ++y)
            for (int z = 0; z < d_; ++z)
                if (at(x, y, z)) out.push_back({x, y, z});
    return out;
}

void Inventory::consume(int type_id) {
    auto it = counts.find(type_id);
    if (it == counts.end() || it->second <= 0)
        throw InventoryError("no bricks of type " + std::to_string(type_id) + " left");
    --it->second;
}

std::vector<Cell> cells_of(const BrickInstance& brick, const BrickCatalog& catalog) {
    const BrickType& t = catalog.at(brick.type_id);
    const int fx = brick.orientation == 0 ? t.footprint_w : t.footprint_d;
    const int fy = brick.orientation == 0 ? t.footprint_d : t.footprint_w;
    std::vector<Cell> cells;
    cells.reserve(static_cast<size_t>(fx) * fy);
    for (int i = 0; i < fx; ++i)
        for (int j = 0; j < fy; ++j)
            cells.push_back({brick.x + i, brick.y + j, brick.z});
    return cells;
}

void Assembly::place(const BrickInstance& brick, const BrickCatalog& catalog) {
    const std::vector<Cell> cells = cells_of(brick, catalog);
    for (const Cell& c : cells) {
        if (!grid_.in_bounds(c.x, c.y, c.z))
            throw PlacementError("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                                 "," + std::to_string(c.z) + ") out of bounds");
        if (grid_.at(c.x, c.y, c.z))
            throw PlacementError("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                                 "," + std::to_string(c.z) + ") already occupied");
    }
    for (const Cell& c : cells) grid_.set(c.x, c.y, c.z, true);
    bricks_.push_back(brick);
}

Assembly place_brick(Assembly assembly, const BrickInstance& brick, const BrickCatalog& catalog) {
    assembly.place(brick, catalog);
    return assembly;
}

ComponentLabels connected_component_labels(const VoxelGrid& grid) {
    ComponentLabels out;
    out.label.assign(static_cast<size_t>(grid.volume()), -1);
    if (grid.empty()) return out;

    std::vector<int32_t> stack;
    const int h = grid.h(), w = grid.w(), d = grid.d();
    for (int x = 0; x < h; ++x) {
        for (int y = 0; y < w; ++y) {
            for (int z = 0; z < d; ++z) {
                const int32_t start = grid.index_of(x, y, z);
                if (!grid.at(start) || out.label[start] != -1) continue;
                const int32_t id = out.count++;
                out.label[start] = id;
                stack.push_back(start);
                while (!stack.empty()) {
                    const Cell c = grid.cell_of(stack.back());
                    stack.pop_back();
                    const std::array<Cell, 6> nbrs = {{{c.x - 1, c.y, c.z},
                                                       {c.x + 1, c.y, c.z},
                                                       {c.x, c.y - 1, c.z},
                                                       {c.x, c.y + 1, c.z},
                                                       {c.x, c.y, c.z - 1},
                                                       {c.x, c.y, c.z + 1}}};
                    for (const Cell& n : nbrs) {
                        if (!grid.in_bounds(n.x, n.y, n.z)) continue;
                        const int32_t ni = grid.index_of(n.x, n.y, n.z);
                        if (grid.at(ni) && out.label[ni] == -1) {
                            out.label[ni] = id;
                            stack.push_back(ni);
                        }
                    }
                }
            }
        }
    }
    return out;
}

int connected_components(const VoxelGrid& grid) {
    return connected_component_labels(grid).count;
}

GridStats grid_stats(const VoxelGrid& grid) {
    GridStats s;
    s.occupied = static_cast<int64_t>(grid.occupied_count());
    s.components = connected_components(grid);
    if (s.occupied == 0) return s;
    int min_x = std::numeric_limits<int>::max(), max_x = std::numeric_limits<int>::min();
    int min_y = min_x, max_y = max_x, min_z = min_x, max_z = max_x;
    for (int x = 0; x < grid.h(); ++x)
        for (int y = 0; y < grid.w(); ++y)
            for (int z = 0; z < grid.d(); ++z)
                if (grid.at(x, y, z)) {
                    min_x = std::min(min_x, x); max_x = std::max(max_x, x);
                    min_y = std::min(min_y, y); max_y = std::max(max_y, y);
                    min_z = std::min(min_z, z); max_z = std::max(max_z, z);
                }
    s.bbox_volume = static_cast<int64_t>(max_x - min_x + 1) * (max_y - min_y + 1) *
                    (max_z - min_z + 1);
    return s;
}

double density_of(const GridStats& s) {
    if (s.occupied == 0) return 0.0;
    return static_cast<double>(s.occupied) / static_cast<double>(s.bbox_volume);
}

double voxel_density(const VoxelGrid& grid) { return density_of(grid_stats(grid)); }

size_t overlap_count(const VoxelGrid& a, const VoxelGrid& b) {
    if (!a.same_dims(b)) throw ShapeError("overlap_count needs equal grid dims");
    size_t n = 0;
    for (int32_t i = 0; i < static_cast<int32_t>(a.volume()); ++i)
        if (a.at(i) && b.at(i)) ++n;
    return n;
}

bool is_grounded(const Assembly& assembly, const BrickCatalog& catalog) {
    const auto& bricks = assembly.bricks();
    if (bricks.empty()) return true;

    // cell -> owning brick
    const VoxelGrid& grid = assembly.grid();
    std::vector<int32_t> owner(static_cast<size_t>(grid.volume()), -1);
    for (size_t i = 0; i < bricks.size(); ++i)
        for (const Cell& c : cells_of(bricks[i], catalog))
            owner[grid.index_of(c.x, c.y, c.z)] = static_cast<int32_t>(i);

    std::vector<uint8_t> reached(bricks.size(), 0);
    std::vector<int32_t> stack;
    for (size_t i = 0; i < bricks.size(); ++i)
        if (bricks[i].z == 0) {
            reached[i] = 1;
            stack.push_back(static_cast<int32_t>(i));
        }
    while (!stack.empty()) {
        const int32_t bi = stack.back();
        stack.pop_back();
        for (const Cell& c : cells_of(bricks[bi], catalog)) {
            for (int dz : {-1, +1}) {
                const int z = c.z + dz;
                if (z < 0 || z >= grid.d()) continue;
                const int32_t other = owner[grid.index_of(c.x, c.y, z)];
                if (other >= 0 && !reached[other]) {
                    reached[other] = 1;
                    stack.push_back(other);
                }
            }
        }
    }
    return std::all_of(reached.begin(), reached.end(), [](uint8_t r) { return r != 0; });
}

} // namespace rebrick
