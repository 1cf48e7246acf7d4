#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace rebrick {

using Vec3 = Eigen::Vector3d;

// Static 3D kd-tree. Median splits on the largest-spread axis; equal keys are
// ordered by point index so construction and queries are fully deterministic.
class KdTree3 {
public:
    explicit KdTree3(std::vector<Vec3> points);

    size_t size() const { return points_.size(); }

    // (index, squared distance) of the nearest point; ties go to the lowest
    // index. Tree must be non-empty.
    std::pair<int, double> nearest(const Vec3& query) const;

    // Indices with distance <= radius, ascending.
    std::vector<int> radius(const Vec3& query, double r) const;

private:
    struct Node {
        int point = -1;
        int axis = 0;
        int left = -1;
        int right = -1;
    };

    int build(std::vector<int>& idx, int lo, int hi);
    void search_nearest(int node, const Vec3& q, int& best, double& best_sq) const;
    void search_radius(int node, const Vec3& q, double r_sq, std::vector<int>& out) const;

    std::vector<Vec3> points_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

} // namespace rebrick
