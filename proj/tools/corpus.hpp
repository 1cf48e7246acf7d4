#pragma once

// Desk-scale object corpus: chair / table / bench / house analogues on a
// 12x12x12 plate plus a 10x10x10 training table. Brick order is bottom-up so
// any prefix stays grounded.

#include <algorithm>
#include <cmath>

#include "rebrick/voxel.hpp"

namespace rebrick::corpus {

// catalog ids: 0:1x1 1:1x2 2:1x4 3:1x6 4:1x8 5:2x2 6:2x4 7:2x6

// The four objects share a similar canonical size (7-10 cells per axis) so
// library rescaling stays near 1 and the structural signatures (hollow house,
// low solid bench, tall-backed chair, slab-on-walls table) stay comparable.

inline Assembly build_chair() {
    const BrickCatalog cat = BrickCatalog::standard();
    Assembly a(12, 12, 12);
    // solid pedestal seat, tall backrest lip on one edge
    for (int z = 0; z < 3; ++z)
        for (int x = 3; x <= 7; x += 2) a.place({7, x, 3, z, 0}, cat);  // 2x6 rows
    for (int z = 3; z <= 7; ++z) a.place({3, 8, 3, z, 0}, cat);         // 1x6 backrest
    return a;
}

inline Assembly build_table() {
    const BrickCatalog cat = BrickCatalog::standard();
    Assembly a(12, 12, 12);
    // a wide open tunnel: end walls + slab spanning them
    for (int z = 0; z < 4; ++z) {
        a.place({7, 1, 3, z, 0}, cat);  // 2x6 wall x=1..2
        a.place({7, 9, 3, z, 0}, cat);  // 2x6 wall x=9..10
    }
    for (int y = 3; y <= 8; ++y) {
        a.place({4, 1, y, 4, 1}, cat);  // 1x8 top row x=1..8
        a.place({1, 9, y, 4, 1}, cat);  // 1x2 top row x=9..10
    }
    return a;
}

inline Assembly build_bench() {
    const BrickCatalog cat = BrickCatalog::standard();
    Assembly a(12, 12, 12);
    for (int y : {1, 5, 9}) a.place({5, 5, y, 0, 0}, cat);  // 2x2 legs
    a.place({7, 5, 1, 1, 0}, cat);                          // seat 2x6 + 2x4
    a.place({6, 5, 7, 1, 0}, cat);
    a.place({6, 5, 1, 2, 0}, cat);                          // seat second course
    a.place({7, 5, 5, 2, 0}, cat);
    return a;
}

inline Assembly build_house() {
    const BrickCatalog cat = BrickCatalog::standard();
    Assembly a(12, 12, 12);
    for (int z = 0; z < 5; ++z) {
        a.place({4, 1, 2, z, 0}, cat);  // 1x8 wall along y at x=1
        a.place({4, 8, 2, z, 0}, cat);  // 1x8 wall along y at x=8
        a.place({3, 2, 2, z, 1}, cat);  // 1x6 wall along x at y=2
        a.place({3, 2, 9, z, 1}, cat);  // 1x6 wall along x at y=9
    }
    for (int x = 1; x <= 7; x += 2) {  // roof slab 8x8 in 2x6+2x2 rows
        a.place({7, x, 2, 5, 0}, cat);
        a.place({5, x, 8, 5, 0}, cat);
    }
    for (int x = 2; x <= 6; x += 2) a.place({7, x, 3, 6, 0}, cat);  // roof step 6x6
    a.place({6, 4, 4, 7, 0}, cat);                                  // ridge cap 2x4
    return a;
}

// 10x10x10 trainer (3-type catalog prefix): two low walls carrying a 6x6 top
// tiled with 1x4 + 1x2 rows.
inline Assembly build_train_table() {
    const BrickCatalog cat = BrickCatalog::standard_prefix(3);
    Assembly a(10, 10, 10);
    for (int z = 0; z < 2; ++z)
        for (int y : {2, 7}) {
            a.place({2, 2, y, z, 1}, cat);  // 1x4 along x
            a.place({1, 6, y, z, 1}, cat);  // 1x2 along x
        }
    for (int x = 2; x <= 7; ++x) {
        a.place({2, x, 2, 2, 0}, cat);  // 1x4 along y
        a.place({1, x, 6, 2, 0}, cat);  // 1x2 along y
    }
    return a;
}

// Voxel-space similarity transform for synthetic trials: rotate about z by a
// multiple-free angle, scale uniformly, translate; each output cell is
// occupied iff its center maps back into an occupied source cell.
inline VoxelGrid resample_grid(const VoxelGrid& src, double angle, double scale,
                               double tx, double ty, double tz, int h, int w, int d) {
    VoxelGrid out(h, w, d);
    const double ca = std::cos(angle), sa = std::sin(angle);
    // source-centered pivot keeps the object in frame
    double cx = 0, cy = 0, cz = 0;
    const auto cells = src.occupied_cells();
    for (const Cell& c : cells) {
        cx += c.x + 0.5;
        cy += c.y + 0.5;
        cz += c.z + 0.5;
    }
    cx /= cells.size();
    cy /= cells.size();
    cz /= cells.size();

    for (int x = 0; x < h; ++x)
        for (int y = 0; y < w; ++y)
            for (int z = 0; z < d; ++z) {
                // invert: undo translation, then scale, then rotation
                const double px = (x + 0.5 - tx - cx) / scale;
                const double py = (y + 0.5 - ty - cy) / scale;
                const double pz = (z + 0.5 - tz - cz) / scale;
                const double rx = ca * px + sa * py + cx;
                const double ry = -sa * px + ca * py + cy;
                const double rz = pz + cz;
                const int sx = static_cast<int>(std::floor(rx));
                const int sy = static_cast<int>(std::floor(ry));
                const int sz = static_cast<int>(std::floor(rz));
                if (src.in_bounds(sx, sy, sz) && src.at(sx, sy, sz))
                    out.set(x, y, z, true);
            }
    return out;
}

// Lattice-exact similarity transform: quarter-turn rotation, rational scale
// num/den anchored at the grid origin, integer translation. The output is a
// legitimate brick-world voxel structure (no fractional-pose aliasing).
inline VoxelGrid resample_grid_lattice(const VoxelGrid& src, int quarter_turns,
                                       int num, int den, int tx, int ty, int tz,
                                       int h, int w, int d) {
    VoxelGrid out(h, w, d);
    for (int x = 0; x < h; ++x)
        for (int y = 0; y < w; ++y)
            for (int z = 0; z < d; ++z) {
                // invert: undo translation, then scale, then rotation
                double px = (x + 0.5 - tx) * den / num;
                double py = (y + 0.5 - ty) * den / num;
                const double pz = (z + 0.5 - tz) * den / num;
                for (int q = 0; q < ((quarter_turns % 4) + 4) % 4; ++q) {
                    // inverse of a +90 degree turn about z
                    const double nx = py;
                    const double ny = -px;
                    px = nx;
                    py = ny;
                }
                const int sx = static_cast<int>(std::floor(px));
                const int sy = static_cast<int>(std::floor(py));
                const int sz = static_cast<int>(std::floor(pz));
                if (src.in_bounds(sx, sy, sz) && src.at(sx, sy, sz))
                    out.set(x, y, z, true);
            }
    return out;
}

// Double the geometry: each brick becomes two crosshatched courses of 1x2
// bricks over its doubled footprint (lower course along y, upper along x), so
// every doubled block interlocks internally and grounding is preserved.
inline Assembly double_scale(const Assembly& src, const BrickCatalog& cat) {
    const VoxelGrid& g = src.grid();
    Assembly out(2 * g.h(), 2 * g.w(), 2 * g.d());
    std::vector<BrickInstance> doubled;
    for (const BrickInstance& b : src.bricks()) {
        const BrickType& t = cat.at(b.type_id);
        const int fx = 2 * (b.orientation == 0 ? t.footprint_w : t.footprint_d);
        const int fy = 2 * (b.orientation == 0 ? t.footprint_d : t.footprint_w);
        for (int i = 0; i < fx; ++i)
            for (int j = 0; j < fy; j += 2)
                doubled.push_back({1, 2 * b.x + i, 2 * b.y + j, 2 * b.z, 0});
        for (int i = 0; i < fx; i += 2)
            for (int j = 0; j < fy; ++j)
                doubled.push_back({1, 2 * b.x + i, 2 * b.y + j, 2 * b.z + 1, 1});
    }
    std::stable_sort(doubled.begin(), doubled.end(),
                     [](const BrickInstance& a, const BrickInstance& b) {
                         return a.z < b.z;
                     });
    for (const BrickInstance& b : doubled) out.place(b, cat);
    return out;
}

} // namespace rebrick::corpus
