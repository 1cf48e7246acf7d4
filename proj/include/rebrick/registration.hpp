#pragma once

#include <span>
#include <vector>

#include "rebrick/features.hpp"
#include "rebrick/pointcloud.hpp"

namespace rebrick {

// Closed-form least-squares rigid fit (SVD) mapping src[i] onto dst[i].
// Needs >= 3 pairs; reflections are corrected to a proper rotation.
RigidTransform fit_rigid(std::span<const Vec3> src, std::span<const Vec3> dst);

struct RansacResult {
    RigidTransform transform;  // maps source onto target
    int inliers = 0;
    double inlier_fraction = 0.0;
};

// Global alignment: sample 3 feature-nearest-neighbor correspondences per
// iteration, fit in closed form, keep the transform with the most inliers
// under the correspondence distance. Deterministic given cfg.rng_seed.
RansacResult ransac_align(const PointCloud& source, const PointCloud& target,
                          const FeatureSet& source_features,
                          const FeatureSet& target_features,
                          const RegistrationConfig& cfg);

// Same sampler, but keeps up to `keep` geometrically distinct hypotheses
// ranked by inlier count. Partial overlaps often hand the single best inlier
// count to a wrong pose, so callers that can rescore downstream (the library
// matcher) refine every hypothesis instead of trusting the ranking.
std::vector<RansacResult> ransac_align_multi(const PointCloud& source,
                                             const PointCloud& target,
                                             const FeatureSet& source_features,
                                             const FeatureSet& target_features,
                                             const RegistrationConfig& cfg, int keep);

struct IcpResult {
    RigidTransform transform;  // maps source onto target
    double rmse = 0.0;         // over the last accepted correspondence set
    size_t correspondences = 0;
    // Accepted per-iteration RMSE, one series per schedule threshold.
    // Non-increasing within each series.
    std::vector<std::vector<double>> rmse_history;
};

// Point-to-point ICP refined over cfg.icp_schedule, tightening the
// correspondence threshold stage by stage. An update that would raise the
// RMSE is rejected and ends the stage. Throws NoOverlapError when the first
// threshold yields no correspondences at all.
IcpResult icp_refine(const PointCloud& source, const PointCloud& target,
                     const RigidTransform& init, const RegistrationConfig& cfg);

} // namespace rebrick
