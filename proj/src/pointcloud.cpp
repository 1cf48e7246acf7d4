#include "rebrick/pointcloud.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "rebrick/kdtree.hpp"

namespace rebrick {

Vec3 PointCloud::centroid() const {
    if (points.empty()) throw EmptyInputError("centroid of empty cloud");
    Vec3 sum = Vec3::Zero();
    for (const Vec3& p : points) sum += p;
    return sum / static_cast<double>(points.size());
}

PointCloud RigidTransform::apply(const PointCloud& cloud) const {
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const Vec3& p : cloud.points) out.points.push_back(apply(p));
    return out;
}

RigidTransform RigidTransform::compose(const RigidTransform& other) const {
    return RigidTransform{rotation * other.rotation, rotation * other.translation + translation};
}

RigidTransform RigidTransform::inverse() const {
    const Mat3 rt = rotation.transpose();
    return RigidTransform{rt, -(rt * translation)};
}

bool RigidTransform::is_valid(double tol) const {
    const Mat3 gram = rotation.transpose() * rotation;
    return (gram - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(rotation.determinant() - 1.0) <= tol &&
           translation.allFinite();
}

PointCloud voxel_to_pointcloud(const VoxelGrid& grid) {
    if (grid.empty()) throw EmptyInputError("voxel grid has no occupied cells");
    PointCloud cloud;
    cloud.points.reserve(grid.occupied_count());
    for (const Cell& c : grid.occupied_cells())
        cloud.points.emplace_back(c.x + 0.5, c.y + 0.5, c.z + 0.5);
    return cloud;
}

VoxelizeResult pointcloud_to_voxel(const PointCloud& cloud, int h, int w, int d) {
    VoxelizeResult out{VoxelGrid(h, w, d), 0};
    for (const Vec3& p : cloud.points) {
        const int x = static_cast<int>(std::floor(p.x()));
        const int y = static_cast<int>(std::floor(p.y()));
        const int z = static_cast<int>(std::floor(p.z()));
        if (out.grid.in_bounds(x, y, z))
            out.grid.set(x, y, z, true);
        else
            ++out.clipped;
    }
    return out;
}

PcaSummary pca(const PointCloud& cloud) {
    if (cloud.empty()) throw EmptyInputError("pca of empty cloud");
    PcaSummary s;
    s.mean = cloud.centroid();
    Mat3 cov = Mat3::Zero();
    for (const Vec3& p : cloud.points) {
        const Vec3 c = p - s.mean;
        cov += c * c.transpose();
    }
    cov /= static_cast<double>(cloud.size());

    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    // Eigen sorts ascending; flip to descending.
    for (int i = 0; i < 3; ++i) {
        s.explained_variances[i] = std::max(0.0, eig.eigenvalues()[2 - i]);
        s.components.col(i) = eig.eigenvectors().col(2 - i);
    }
    return s;
}

ScaleResult pca_scale(const PointCloud& source, const PointCloud& target) {
    const PcaSummary src = pca(source);
    const PcaSummary tgt = pca(target);

    const double var_floor = 1e-12 * std::max(1.0, tgt.explained_variances.maxCoeff());
    double scale = 0.0;
    bool usable_axis = false;
    for (int i = 0; i < 3; ++i) {
        if (tgt.explained_variances[i] <= var_floor) continue;  // degenerate axis
        usable_axis = true;
        scale = std::max(scale, std::sqrt(src.explained_variances[i] /
                                          tgt.explained_variances[i]));
    }
    if (!usable_axis)
        throw DegenerateGeometryError("target cloud has no variance on any axis");
    if (scale <= 0.0)
        throw DegenerateGeometryError("source cloud has no variance on any usable axis");

    ScaleResult out;
    out.scale = scale;
    out.scaled.points.reserve(target.size());
    for (const Vec3& p : target.points)
        out.scaled.points.push_back(tgt.mean + scale * (p - tgt.mean));
    return out;
}

double chamfer_distance(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw EmptyInputError("chamfer of empty cloud");
    const KdTree3 tree_a(a.points);
    const KdTree3 tree_b(b.points);
    double sum_ab = 0.0;
    for (const Vec3& p : a.points) sum_ab += std::sqrt(tree_b.nearest(p).second);
    double sum_ba = 0.0;
    for (const Vec3& p : b.points) sum_ba += std::sqrt(tree_a.nearest(p).second);
    return 0.5 * (sum_ab / static_cast<double>(a.size()) +
                  sum_ba / static_cast<double>(b.size()));
}

std::string to_ply(const PointCloud& cloud) {
    std::string out;
    out += "ply\nformat ascii 1.0\nelement vertex " + std::to_string(cloud.size()) +
           "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    char line[96];
    for (const Vec3& p : cloud.points) {
        std::snprintf(line, sizeof(line), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
        out += line;
    }
    return out;
}

} // namespace rebrick
