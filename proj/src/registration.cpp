#include "rebrick/registration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "rebrick/errors.hpp"
#include "rebrick/kdtree.hpp"
#include "rebrick/rng.hpp"

namespace rebrick {

RigidTransform fit_rigid(std::span<const Vec3> src, std::span<const Vec3> dst) {
    if (src.size() != dst.size()) throw ShapeError("fit_rigid: size mismatch");
    if (src.size() < 3) throw InsufficientPointsError("fit_rigid needs >= 3 pairs");

    Vec3 src_mean = Vec3::Zero(), dst_mean = Vec3::Zero();
    for (size_t i = 0; i < src.size(); ++i) {
        src_mean += src[i];
        dst_mean += dst[i];
    }
    src_mean /= static_cast<double>(src.size());
    dst_mean /= static_cast<double>(dst.size());

    Mat3 cross = Mat3::Zero();
    for (size_t i = 0; i < src.size(); ++i)
        cross += (src[i] - src_mean) * (dst[i] - dst_mean).transpose();

    Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 rot = svd.matrixV() * svd.matrixU().transpose();
    if (rot.determinant() < 0) {
        Mat3 flip = Mat3::Identity();
        flip(2, 2) = -1.0;
        rot = svd.matrixV() * flip * svd.matrixU().transpose();
    }
    return RigidTransform{rot, dst_mean - rot * src_mean};
}

namespace {

// rotation angle between two transforms plus translation gap
bool similar_pose(const RigidTransform& a, const RigidTransform& b) {
    const double c = ((a.rotation.transpose() * b.rotation).trace() - 1.0) / 2.0;
    const double angle = std::acos(std::clamp(c, -1.0, 1.0));
    return angle < 0.15 && (a.translation - b.translation).norm() < 0.75;
}

} // namespace

std::vector<RansacResult> ransac_align_multi(const PointCloud& source,
                                             const PointCloud& target,
                                             const FeatureSet& source_features,
                                             const FeatureSet& target_features,
                                             const RegistrationConfig& cfg, int keep) {
    cfg.validate();
    if (keep < 1) throw ConfigError("ransac_align_multi: keep must be >= 1");
    if (source.size() < 3 || target.size() < 3)
        throw InsufficientPointsError("ransac_align needs >= 3 points per cloud");
    if (source_features.size() != source.size() || target_features.size() != target.size())
        throw ShapeError("feature set does not match its cloud");

    const int n_src = static_cast<int>(source.size());
    const int n_tgt = static_cast<int>(target.size());

    // Feature-space nearest neighbor per source point (33-dim, brute force —
    // the clouds here are small).
    std::vector<int> best_match(n_src, 0);
    for (int i = 0; i < n_src; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n_tgt; ++j) {
            const double d =
                (target_features.histograms.col(j) - source_features.histograms.col(i))
                    .squaredNorm();
            if (d < best) {
                best = d;
                best_match[i] = j;
            }
        }
    }

    const KdTree3 tgt_tree(target.points);
    const double max_dist_sq =
        cfg.ransac_correspondence_distance * cfg.ransac_correspondence_distance;

    // Inliers = distinct target points claimed within the correspondence
    // distance. Counting distinct targets (not source hits) keeps partial
    // overlaps honest: surplus source points folded onto already-claimed
    // targets add nothing.
    std::vector<uint8_t> claimed(n_tgt, 0);
    auto count_inliers = [&](const RigidTransform& t) {
        std::fill(claimed.begin(), claimed.end(), 0);
        int inliers = 0;
        for (const Vec3& p : source.points) {
            const auto [idx, d_sq] = tgt_tree.nearest(t.apply(p));
            if (d_sq <= max_dist_sq && !claimed[idx]) {
                claimed[idx] = 1;
                ++inliers;
            }
        }
        return inliers;
    };

    Rng rng(cfg.rng_seed);
    std::vector<RansacResult> kept;

    std::array<Vec3, 3> s_pts, t_pts;
    for (int iter = 0; iter < cfg.ransac_iterations; ++iter) {
        int a = static_cast<int>(rng.uniform_index(n_src));
        int b = static_cast<int>(rng.uniform_index(n_src));
        int c = static_cast<int>(rng.uniform_index(n_src));
        if (a == b || b == c || a == c) continue;

        s_pts = {source.points[a], source.points[b], source.points[c]};
        t_pts = {target.points[best_match[a]], target.points[best_match[b]],
                 target.points[best_match[c]]};
        // Degenerate (collinear) samples cannot pin down a rotation.
        if ((s_pts[1] - s_pts[0]).cross(s_pts[2] - s_pts[0]).squaredNorm() < 1e-9) continue;
        if ((t_pts[1] - t_pts[0]).cross(t_pts[2] - t_pts[0]).squaredNorm() < 1e-9) continue;

        const RigidTransform t = fit_rigid(s_pts, t_pts);
        const int inliers = count_inliers(t);

        bool merged = false;
        for (RansacResult& held : kept) {
            if (similar_pose(held.transform, t)) {
                if (inliers > held.inliers) {
                    held.transform = t;
                    held.inliers = inliers;
                }
                merged = true;
                break;
            }
        }
        if (merged) continue;
        if (static_cast<int>(kept.size()) < keep) {
            kept.push_back(RansacResult{t, inliers, 0.0});
        } else {
            auto weakest = std::min_element(
                kept.begin(), kept.end(),
                [](const RansacResult& x, const RansacResult& y) {
                    return x.inliers < y.inliers;
                });
            if (inliers > weakest->inliers) *weakest = RansacResult{t, inliers, 0.0};
        }
    }

    if (kept.empty()) {
        RansacResult fallback;
        fallback.inliers = count_inliers(fallback.transform);
        kept.push_back(fallback);
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const RansacResult& x, const RansacResult& y) {
                         return x.inliers > y.inliers;
                     });
    for (RansacResult& r : kept)
        r.inlier_fraction = static_cast<double>(r.inliers) / n_tgt;
    return kept;
}

RansacResult ransac_align(const PointCloud& source, const PointCloud& target,
                          const FeatureSet& source_features,
                          const FeatureSet& target_features,
                          const RegistrationConfig& cfg) {
    return ransac_align_multi(source, target, source_features, target_features, cfg, 1)
        .front();
}

IcpResult icp_refine(const PointCloud& source, const PointCloud& target,
                     const RigidTransform& init, const RegistrationConfig& cfg) {
    cfg.validate();
    if (source.empty() || target.empty()) throw EmptyInputError("icp on empty cloud");
    if (!init.is_valid()) throw ConfigError("icp init is not a rigid transform");

    const KdTree3 tgt_tree(target.points);

    IcpResult out;
    out.transform = init;

    std::vector<Vec3> moved, matched;
    for (size_t stage = 0; stage < cfg.icp_schedule.size(); ++stage) {
        const double threshold = cfg.icp_schedule[stage];
        const double threshold_sq = threshold * threshold;
        out.rmse_history.emplace_back();
        double prev_rmse = std::numeric_limits<double>::infinity();

        for (int iter = 0; iter < cfg.icp_max_iterations_per_threshold; ++iter) {
            moved.clear();
            matched.clear();
            for (const Vec3& p : source.points) {
                const Vec3 q = out.transform.apply(p);
                const auto [idx, d_sq] = tgt_tree.nearest(q);
                if (d_sq <= threshold_sq) {
                    moved.push_back(q);
                    matched.push_back(target.points[idx]);
                }
            }
            if (moved.size() < 3) {
                if (stage == 0 && iter == 0)
                    throw NoOverlapError("icp: no usable correspondences at threshold " +
                                         std::to_string(threshold));
                break;
            }

            const RigidTransform delta = fit_rigid(moved, matched);
            double sq_sum = 0.0;
            for (size_t i = 0; i < moved.size(); ++i)
                sq_sum += (delta.apply(moved[i]) - matched[i]).squaredNorm();
            const double rmse = std::sqrt(sq_sum / static_cast<double>(moved.size()));

            if (rmse > prev_rmse) break;  // would worsen; keep the previous fit

            out.transform = delta.compose(out.transform);
            out.rmse_history[stage].push_back(rmse);
            out.rmse = rmse;
            out.correspondences = moved.size();
            if (prev_rmse - rmse < 1e-6) break;
            prev_rmse = rmse;
        }
    }
    return out;
}

} // namespace rebrick
