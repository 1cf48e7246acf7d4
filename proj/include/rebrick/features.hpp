#pragma once

#include <Eigen/Core>
#include <vector>

#include "rebrick/pointcloud.hpp"

namespace rebrick {

// Tunables for the scale/register stage. icp_schedule must be strictly
// decreasing and positive.
struct RegistrationConfig {
    double normal_radius = 2.5;       // voxel units
    double feature_radius = 5.0;      // voxel units
    int ransac_iterations = 4000;
    double ransac_correspondence_distance = 1.5;
    std::vector<double> icp_schedule{4.0, 2.0, 1.0, 0.5};
    int icp_max_iterations_per_threshold = 30;
    uint64_t rng_seed = 0;

    void validate() const;
};

// 33-bin FPFH per point: 3 pair angles x 11 bins.
struct FeatureSet {
    static constexpr int kBinsPerAngle = 11;
    static constexpr int kDims = 33;

    Eigen::MatrixXd histograms;     // kDims x n
    std::vector<uint8_t> isolated;  // 1 where the point had no neighbors in range

    size_t size() const { return isolated.size(); }
};

// Smallest-eigenvector normals from the local covariance within
// normal_radius, unit length, oriented away from the cloud centroid.
// Neighborhoods with < 3 points fall back to the centroid-to-point direction.
std::vector<Vec3> estimate_normals(const PointCloud& cloud, const RegistrationConfig& cfg);

FeatureSet compute_fpfh(const PointCloud& cloud, const std::vector<Vec3>& normals,
                        const RegistrationConfig& cfg);

} // namespace rebrick
