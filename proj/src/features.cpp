#include "rebrick/features.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "rebrick/errors.hpp"
#include "rebrick/kdtree.hpp"

namespace rebrick {

void RegistrationConfig::validate() const {
    if (normal_radius <= 0 || feature_radius <= 0)
        throw ConfigError("registration radii must be positive");
    if (ransac_iterations < 1) throw ConfigError("ransac_iterations must be >= 1");
    if (ransac_correspondence_distance <= 0)
        throw ConfigError("ransac_correspondence_distance must be positive");
    if (icp_schedule.empty()) throw ConfigError("icp_schedule must be non-empty");
    for (size_t i = 0; i < icp_schedule.size(); ++i) {
        if (icp_schedule[i] <= 0) throw ConfigError("icp thresholds must be positive");
        if (i > 0 && icp_schedule[i] >= icp_schedule[i - 1])
            throw ConfigError("icp_schedule must be strictly decreasing");
    }
    if (icp_max_iterations_per_threshold < 1)
        throw ConfigError("icp_max_iterations_per_threshold must be >= 1");
}

std::vector<Vec3> estimate_normals(const PointCloud& cloud, const RegistrationConfig& cfg) {
    if (cloud.empty()) throw EmptyInputError("normals of empty cloud");
    const Vec3 center = cloud.centroid();
    const KdTree3 tree(cloud.points);

    std::vector<Vec3> normals(cloud.size());
    for (size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.points[i];
        const std::vector<int> nbrs = tree.radius(p, cfg.normal_radius);

        Vec3 n;
        if (nbrs.size() < 3) {
            // Too sparse for a covariance; point away from the cloud center.
            n = p - center;
            if (n.squaredNorm() < 1e-24) n = Vec3(0, 0, 1);
            n.normalize();
            normals[i] = n;
            continue;
        }

        Vec3 mean = Vec3::Zero();
        for (int j : nbrs) mean += cloud.points[j];
        mean /= static_cast<double>(nbrs.size());
        Mat3 cov = Mat3::Zero();
        for (int j : nbrs) {
            const Vec3 c = cloud.points[j] - mean;
            cov += c * c.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
        n = eig.eigenvectors().col(0);  // smallest eigenvalue

        const double toward = n.dot(p - center);
        if (toward < -1e-12) {
            n = -n;
        } else if (toward <= 1e-12) {
            // Ambiguous (point near the centroid plane); canonical sign.
            if (n.z() < 0 || (n.z() == 0 && (n.y() < 0 || (n.y() == 0 && n.x() < 0))))
                n = -n;
        }
        normals[i] = n;
    }
    return normals;
}

namespace {

// Darboux-frame pair angles (alpha, phi, theta) between two oriented points.
// Returns false for coincident points or a degenerate frame.
bool pair_angles(const Vec3& p1, const Vec3& n1_in, const Vec3& p2, const Vec3& n2_in,
                 double& alpha, double& phi, double& theta) {
    Vec3 d = p2 - p1;
    const double dist = d.norm();
    if (dist < 1e-12) return false;
    d /= dist;

    Vec3 ns = n1_in, nt = n2_in;
    // Source is the point whose normal is better aligned with the segment.
    const double a1 = ns.dot(d), a2 = nt.dot(d);
    if (std::acos(std::abs(a1)) > std::acos(std::abs(a2))) {
        std::swap(ns, nt);
        d = -d;
    }
    const Vec3 u = ns;
    Vec3 v = d.cross(u);
    const double v_norm = v.norm();
    if (v_norm < 1e-12) return false;
    v /= v_norm;
    const Vec3 w = u.cross(v);

    alpha = v.dot(nt);
    phi = u.dot(d);
    theta = std::atan2(w.dot(nt), u.dot(nt));
    return true;
}

inline int bin_of(double value, double lo, double hi) {
    const int b = static_cast<int>(std::floor((value - lo) / (hi - lo) *
                                              FeatureSet::kBinsPerAngle));
    return std::clamp(b, 0, FeatureSet::kBinsPerAngle - 1);
}

} // namespace

FeatureSet compute_fpfh(const PointCloud& cloud, const std::vector<Vec3>& normals,
                        const RegistrationConfig& cfg) {
    if (cloud.empty()) throw EmptyInputError("fpfh of empty cloud");
    if (normals.size() != cloud.size())
        throw ShapeError("normals and cloud sizes differ");

    const int n = static_cast<int>(cloud.size());
    const KdTree3 tree(cloud.points);

    std::vector<std::vector<int>> neighborhood(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> nbrs = tree.radius(cloud.points[i], cfg.feature_radius);
        std::erase(nbrs, i);
        neighborhood[i] = std::move(nbrs);
    }

    // Simplified histograms first.
    Eigen::MatrixXd spfh = Eigen::MatrixXd::Zero(FeatureSet::kDims, n);
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = neighborhood[i];
        if (nbrs.empty()) continue;
        const double weight = 1.0 / static_cast<double>(nbrs.size());
        for (int j : nbrs) {
            double alpha, phi, theta;
            if (!pair_angles(cloud.points[i], normals[i], cloud.points[j], normals[j],
                             alpha, phi, theta))
                continue;
            spfh(bin_of(alpha, -1.0, 1.0), i) += weight;
            spfh(FeatureSet::kBinsPerAngle + bin_of(phi, -1.0, 1.0), i) += weight;
            spfh(2 * FeatureSet::kBinsPerAngle + bin_of(theta, -M_PI, M_PI), i) += weight;
        }
    }

    // FPFH(p) = SPFH(p) + (1/k) sum_q (1/dist) SPFH(q)
    FeatureSet out;
    out.histograms = Eigen::MatrixXd::Zero(FeatureSet::kDims, n);
    out.isolated.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = neighborhood[i];
        if (nbrs.empty()) {
            out.isolated[i] = 1;  // zero histogram, flagged
            continue;
        }
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(FeatureSet::kDims);
        for (int j : nbrs) {
            const double dist = (cloud.points[i] - cloud.points[j]).norm();
            if (dist < 1e-12) continue;
            acc += spfh.col(j) / dist;
        }
        out.histograms.col(i) =
            spfh.col(i) + acc / static_cast<double>(nbrs.size());
    }
    return out;
}

} // namespace rebrick
