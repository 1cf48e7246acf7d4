#include <Eigen/Geometry>

#include "doctest.h"
#include "rebrick/registration.hpp"
#include "rebrick/rng.hpp"

using namespace rebrick;

namespace {

// Asymmetric test object: slab + corner tower + one arm stub. No rotational
// self-symmetry, so recovered transforms are unique.
PointCloud l_shape() {
    PointCloud c;
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 3; ++y) c.points.emplace_back(x + 0.5, y + 0.5, 0.5);
    for (int z = 1; z <= 4; ++z) c.points.emplace_back(0.5, 0.5, z + 0.5);
    c.points.emplace_back(5.5, 2.5, 1.5);
    return c;
}

PointCloud random_cloud(Rng& rng, int n, double extent) {
    PointCloud c;
    for (int i = 0; i < n; ++i)
        c.points.emplace_back(rng.uniform(0, extent), rng.uniform(0, extent),
                              rng.uniform(0, extent));
    return c;
}

Mat3 rot_z(double angle) {
    return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

} // namespace

TEST_SUITE("registration") {

TEST_CASE("normals: planar grid is perpendicular to the plane") {
    PointCloud plane;
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y) plane.points.emplace_back(x, y, 0.0);

    RegistrationConfig cfg;
    const std::vector<Vec3> normals = estimate_normals(plane, cfg);
    for (size_t i = 0; i < normals.size(); ++i) {
        CHECK(normals[i].norm() == doctest::Approx(1.0));
        CHECK(std::abs(normals[i].dot(Vec3::UnitZ())) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("normals: unit length and outward orientation on a shell") {
    PointCloud shell;
    Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        const Vec3 dir = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
        shell.points.push_back(10.0 * dir);
    }
    RegistrationConfig cfg;
    cfg.normal_radius = 4.0;
    const std::vector<Vec3> normals = estimate_normals(shell, cfg);
    int outward = 0;
    for (size_t i = 0; i < normals.size(); ++i) {
        CHECK(normals[i].norm() == doctest::Approx(1.0));
        if (normals[i].dot(shell.points[i]) > 0) ++outward;
    }
    CHECK(outward == static_cast<int>(shell.size()));
}

TEST_CASE("fpfh: non-negative histograms, isolated points flagged") {
    Rng rng(88);
    PointCloud cloud = random_cloud(rng, 50, 6.0);
    cloud.points.emplace_back(100.0, 100.0, 100.0);  // far away from everything

    RegistrationConfig cfg;
    const auto normals = estimate_normals(cloud, cfg);
    const FeatureSet f = compute_fpfh(cloud, normals, cfg);
    CHECK(f.histograms.minCoeff() >= 0.0);
    CHECK(f.isolated.back() == 1);
    CHECK(f.histograms.col(static_cast<int>(cloud.size()) - 1).norm() == 0.0);
    for (size_t i = 0; i + 1 < cloud.size(); ++i) CHECK(f.isolated[i] == 0);
}

TEST_CASE("fpfh: rigid invariance under correspondence") {
    Rng rng(99);
    RegistrationConfig cfg;
    for (int trial = 0; trial < 5; ++trial) {
        const PointCloud cloud = random_cloud(rng, 60, 6.0);
        const Vec3 axis = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
        const Mat3 rot = Eigen::AngleAxisd(rng.uniform(0, 2 * M_PI), axis).toRotationMatrix();
        const Vec3 shift(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
        PointCloud moved;
        for (const Vec3& p : cloud.points) moved.points.push_back(rot * p + shift);

        const FeatureSet fa = compute_fpfh(cloud, estimate_normals(cloud, cfg), cfg);
        const FeatureSet fb = compute_fpfh(moved, estimate_normals(moved, cfg), cfg);
        const double max_err = (fa.histograms - fb.histograms).cwiseAbs().maxCoeff();
        CHECK(max_err < 1e-6);
    }
}

TEST_CASE("fit_rigid recovers the exact transform of noiseless pairs") {
    Rng rng(111);
    const Mat3 rot = rot_z(0.83);
    const Vec3 shift(2, -1, 4);
    std::vector<Vec3> src, dst;
    for (int i = 0; i < 10; ++i) {
        src.emplace_back(rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5));
        dst.push_back(rot * src.back() + shift);
    }
    const RigidTransform t = fit_rigid(src, dst);
    CHECK(t.rotation.isApprox(rot, 1e-9));
    CHECK(t.translation.isApprox(shift, 1e-9));
    CHECK_THROWS_AS(fit_rigid(std::span<const Vec3>(src.data(), 2),
                              std::span<const Vec3>(dst.data(), 2)),
                    InsufficientPointsError);
}

TEST_CASE("ransac: identity case") {
    const PointCloud cloud = l_shape();
    RegistrationConfig cfg;
    cfg.rng_seed = 4;
    const auto normals = estimate_normals(cloud, cfg);
    const FeatureSet f = compute_fpfh(cloud, normals, cfg);

    const RansacResult r = ransac_align(cloud, cloud, f, f, cfg);
    CHECK(r.inlier_fraction >= 0.99);
    CHECK((r.transform.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-3);
    CHECK(r.transform.translation.norm() < 1e-3);
}

TEST_CASE("ransac: recovers a 90-degree rotation (ground-truth oracle)") {
    const PointCloud source = l_shape();
    const Mat3 rot = rot_z(M_PI / 2);
    const Vec3 shift(7.0, 3.0, 1.0);
    PointCloud target;
    for (const Vec3& p : source.points) target.points.push_back(rot * p + shift);

    RegistrationConfig cfg;
    cfg.rng_seed = 11;
    const auto ns = estimate_normals(source, cfg);
    const auto nt = estimate_normals(target, cfg);
    const FeatureSet fs = compute_fpfh(source, ns, cfg);
    const FeatureSet ft = compute_fpfh(target, nt, cfg);

    const RansacResult r = ransac_align(source, target, fs, ft, cfg);
    double sq = 0.0;
    for (const Vec3& p : source.points)
        sq += (r.transform.apply(p) - (rot * p + shift)).squaredNorm();
    const double rmse = std::sqrt(sq / source.size());
    CHECK(rmse <= 0.25);

    // fixed seed -> bit-identical output
    const RansacResult again = ransac_align(source, target, fs, ft, cfg);
    CHECK(again.transform.rotation == r.transform.rotation);
    CHECK(again.transform.translation == r.transform.translation);
    CHECK(again.inliers == r.inliers);
}

TEST_CASE("ransac: too few points") {
    PointCloud tiny;
    tiny.points.emplace_back(0, 0, 0);
    tiny.points.emplace_back(1, 0, 0);
    RegistrationConfig cfg;
    FeatureSet f;
    f.histograms = Eigen::MatrixXd::Zero(FeatureSet::kDims, 2);
    f.isolated.assign(2, 0);
    CHECK_THROWS_AS(ransac_align(tiny, tiny, f, f, cfg), InsufficientPointsError);
}

TEST_CASE("icp: pre-aligned input is a fixed point") {
    const PointCloud cloud = l_shape();
    RegistrationConfig cfg;
    const IcpResult r = icp_refine(cloud, cloud, RigidTransform{}, cfg);
    CHECK((r.transform.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(r.transform.translation.norm() < 1e-6);
    CHECK(r.rmse < 1e-9);
}

TEST_CASE("icp: one iteration recovers a small pure translation") {
    const PointCloud target = l_shape();
    PointCloud source;
    for (const Vec3& p : target.points) source.points.push_back(p - Vec3(0.3, 0, 0));

    RegistrationConfig cfg;
    cfg.icp_schedule = {1.0};
    const IcpResult r = icp_refine(source, target, RigidTransform{}, cfg);
    CHECK((r.transform.apply(source.points[0]) - target.points[0]).norm() < 1e-6);
    CHECK((r.transform.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((r.transform.translation - Vec3(0.3, 0, 0)).norm() < 1e-6);
}

TEST_CASE("icp: refines the ransac result on the rotation case") {
    const PointCloud source = l_shape();
    const Mat3 rot = rot_z(M_PI / 2);
    const Vec3 shift(7.0, 3.0, 1.0);
    PointCloud target;
    for (const Vec3& p : source.points) target.points.push_back(rot * p + shift);

    RegistrationConfig cfg;
    cfg.rng_seed = 19;
    const auto ns = estimate_normals(source, cfg);
    const auto nt = estimate_normals(target, cfg);
    const RansacResult coarse = ransac_align(source, target,
                                             compute_fpfh(source, ns, cfg),
                                             compute_fpfh(target, nt, cfg), cfg);
    auto rmse_vs_truth = [&](const RigidTransform& t) {
        double sq = 0.0;
        for (const Vec3& p : source.points)
            sq += (t.apply(p) - (rot * p + shift)).squaredNorm();
        return std::sqrt(sq / source.size());
    };
    const IcpResult fine = icp_refine(source, target, coarse.transform, cfg);
    CHECK(rmse_vs_truth(fine.transform) <= rmse_vs_truth(coarse.transform) + 1e-12);
    CHECK(rmse_vs_truth(fine.transform) < 1e-6);
}

TEST_CASE("icp: accepted rmse is non-increasing within each threshold") {
    Rng rng(222);
    RegistrationConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        const PointCloud target = random_cloud(rng, 60, 8.0);
        const Mat3 rot = rot_z(rng.uniform(-0.4, 0.4));
        const Vec3 shift(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        PointCloud source;
        for (const Vec3& p : target.points)
            source.points.push_back(rot.transpose() * (p - shift));

        const IcpResult r = icp_refine(source, target, RigidTransform{}, cfg);
        for (const auto& series : r.rmse_history)
            for (size_t i = 1; i < series.size(); ++i)
                CHECK(series[i] <= series[i - 1] + 1e-12);
    }
}

TEST_CASE("icp: disjoint clouds raise no-overlap") {
    PointCloud a = l_shape();
    PointCloud b;
    for (const Vec3& p : a.points) b.points.push_back(p + Vec3(100, 100, 100));
    RegistrationConfig cfg;
    CHECK_THROWS_AS(icp_refine(a, b, RigidTransform{}, cfg), NoOverlapError);
}

TEST_CASE("config validation") {
    RegistrationConfig cfg;
    cfg.icp_schedule = {2.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.icp_schedule = {2.0, -1.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.icp_schedule = {4.0, 1.0};
    CHECK_NOTHROW(cfg.validate());
}

} // TEST_SUITE
