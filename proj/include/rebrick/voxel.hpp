#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rebrick/errors.hpp"

namespace rebrick {

// Integer cell coordinates. z is vertical; z = 0 rests on the baseplate
// (the plate itself is not an occupied cell).
struct Cell {
    int x = 0, y = 0, z = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

// One brick footprint from the catalog. Heights are always one cell
// (plate model); only the footprint varies.
struct BrickType {
    int id = 0;
    int footprint_w = 1;  // extent along x at orientation 0
    int footprint_d = 1;  // extent along y at orientation 0
    int height = 1;
    std::string name;
};

class BrickCatalog {
public:
    explicit BrickCatalog(std::vector<BrickType> bricks);

    // The 8-brick set: 1x1, 1x2, 1x4, 1x6, 1x8, 2x2, 2x4, 2x6.
    static BrickCatalog standard();
    // First n entries of the standard set (small action spaces for training).
    static BrickCatalog standard_prefix(int n);

    int size() const { return static_cast<int>(bricks_.size()); }
    const BrickType& at(int type_id) const;
    bool is_square(int type_id) const;

private:
    std::vector<BrickType> bricks_;
};

// A placed brick: catalog type, lowest-corner cell, orientation.
// orientation 1 swaps the footprint axes.
struct BrickInstance {
    int type_id = 0;
    int x = 0, y = 0, z = 0;
    int orientation = 0;
    friend bool operator==(const BrickInstance&, const BrickInstance&) = default;
};

// Dense binary occupancy over [0,h) x [0,w) x [0,d). h and w are the
// horizontal extents (x, y), d is the vertical extent (z).
class VoxelGrid {
public:
    VoxelGrid() = default;
    VoxelGrid(int h, int w, int d);

    int h() const { return h_; }
    int w() const { return w_; }
    int d() const { return d_; }
    int64_t volume() const { return static_cast<int64_t>(h_) * w_ * d_; }

    bool in_bounds(int x, int y, int z) const {
        return x >= 0 && x < h_ && y >= 0 && y < w_ && z >= 0 && z < d_;
    }
    bool same_dims(const VoxelGrid& o) const {
        return h_ == o.h_ && w_ == o.w_ && d_ == o.d_;
    }

    int32_t index_of(int x, int y, int z) const {
        return (static_cast<int32_t>(x) * w_ + y) * d_ + z;
    }
    Cell cell_of(int32_t index) const {
        const int z = static_cast<int>(index % d_);
        const int y = static_cast<int>((index / d_) % w_);
        const int x = static_cast<int>(index / (static_cast<int64_t>(d_) * w_));
        return {x, y, z};
    }

    bool at(int x, int y, int z) const { return occ_[index_of(x, y, z)] != 0; }
    bool at(int32_t index) const { return occ_[index] != 0; }
    void set(int x, int y, int z, bool occupied);
    void set(int32_t index, bool occupied);

    size_t occupied_count() const { return count_; }
    bool empty() const { return count_ == 0; }

    // Ascending linear indices == row-major (x, y, z) order.
    std::vector<int32_t> occupied_indices() const;
    std::vector<Cell> occupied_cells() const;

    friend bool operator==(const VoxelGrid& a, const VoxelGrid& b) {
        return a.h_ == b.h_ && a.w_ == b.w_ && a.d_ == b.d_ && a.occ_ == b.occ_;
    }

private:
    int h_ = 0, w_ = 0, d_ = 0;
    std::vector<uint8_t> occ_;
    size_t count_ = 0;
};

// Brick counts by type id. Decrement only happens through a placement.
struct Inventory {
    std::map<int, int> counts;

    int count(int type_id) const {
        auto it = counts.find(type_id);
        return it == counts.end() ? 0 : it->second;
    }
    void add(int type_id, int n) { counts[type_id] += n; }
    void consume(int type_id);

    friend bool operator==(const Inventory&, const Inventory&) = default;
};

// Brick sequence plus the grid it materializes. The grid is always the
// disjoint union of the bricks' cells.
class Assembly {
public:
    Assembly() = default;
    Assembly(int h, int w, int d) : grid_(h, w, d) {}

    const VoxelGrid& grid() const { return grid_; }
    const std::vector<BrickInstance>& bricks() const { return bricks_; }

    // Throws PlacementError naming the offending cell on collision or
    // out-of-bounds footprints.
    void place(const BrickInstance& brick, const BrickCatalog& catalog);

private:
    VoxelGrid grid_;
    std::vector<BrickInstance> bricks_;
};

// Footprint cells in row-major order (x outer, y inner) at the brick's z.
std::vector<Cell> cells_of(const BrickInstance& brick, const BrickCatalog& catalog);

// place() with value semantics, for callers that want the copy.
Assembly place_brick(Assembly assembly, const BrickInstance& brick,
                     const BrickCatalog& catalog);

// Maximal 6-connected (face adjacency) components of the occupied set.
// Empty grid -> 0.
int connected_components(const VoxelGrid& grid);

// Per-cell component label (-1 where empty) plus the component count.
struct ComponentLabels {
    std::vector<int32_t> label;
    int count = 0;
};
ComponentLabels connected_component_labels(const VoxelGrid& grid);

// Occupied count / tight bounding-box volume. Empty grid -> 0.
double voxel_density(const VoxelGrid& grid);

// Cells occupied in both grids. Dimensions must match.
size_t overlap_count(const VoxelGrid& a, const VoxelGrid& b);

// Structural summary consumed by the similarity metric.
struct GridStats {
    int components = 0;
    int64_t occupied = 0;
    int64_t bbox_volume = 0;  // 0 when empty
};
GridStats grid_stats(const VoxelGrid& grid);
double density_of(const GridStats& s);

// Every brick reachable from some z = 0 brick through vertical adjacency
// (a cell of one brick directly above a cell of the other).
bool is_grounded(const Assembly& assembly, const BrickCatalog& catalog);

} // namespace rebrick
