#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rebrick/voxel.hpp"

namespace rebrick {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Real-valued points in voxel units.
struct PointCloud {
    std::vector<Vec3> points;

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    Vec3 centroid() const;  // throws EmptyInputError
};

// Principal axes ordered by descending explained variance (population
// covariance of the centered points).
struct PcaSummary {
    Vec3 mean = Vec3::Zero();
    Mat3 components = Mat3::Identity();  // columns are the axes
    Vec3 explained_variances = Vec3::Zero();
};

struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    PointCloud apply(const PointCloud& cloud) const;
    // this after other: x -> this(other(x))
    RigidTransform compose(const RigidTransform& other) const;
    RigidTransform inverse() const;
    bool is_valid(double tol = 1e-6) const;
};

// One point per occupied cell, at the cell center (x+0.5, y+0.5, z+0.5),
// row-major order. Throws EmptyInputError on an empty grid.
PointCloud voxel_to_pointcloud(const VoxelGrid& grid);

struct VoxelizeResult {
    VoxelGrid grid;
    size_t clipped = 0;  // points outside dims, dropped
};
// Cell occupied iff >= 1 point lands in [x,x+1)x[y,y+1)x[z,z+1).
VoxelizeResult pointcloud_to_voxel(const PointCloud& cloud, int h, int w, int d);

PcaSummary pca(const PointCloud& cloud);

struct ScaleResult {
    PointCloud scaled;   // target scaled about its centroid
    double scale = 1.0;  // max over axes of sqrt(var_source / var_target)
};
// Uniform scale that makes the target's principal variances envelop the
// source's. Zero-variance target axes are skipped; all-zero target variance
// (or source) is a DegenerateGeometryError.
ScaleResult pca_scale(const PointCloud& source, const PointCloud& target);

// Symmetric Chamfer distance: (mean nearest a->b + mean nearest b->a) / 2.
double chamfer_distance(const PointCloud& a, const PointCloud& b);

// ASCII PLY, one "x y z" line per point, 6 decimal places.
std::string to_ply(const PointCloud& cloud);

} // namespace rebrick
