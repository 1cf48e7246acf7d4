#include "rebrick/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace rebrick {

KdTree3::KdTree3(std::vector<Vec3> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    std::vector<int> idx(points_.size());
    std::iota(idx.begin(), idx.end(), 0);
    nodes_.reserve(points_.size());
    root_ = build(idx, 0, static_cast<int>(idx.size()));
}

int KdTree3::build(std::vector<int>& idx, int lo, int hi) {
    if (lo >= hi) return -1;

    Vec3 mn = points_[idx[lo]], mx = points_[idx[lo]];
    for (int i = lo + 1; i < hi; ++i) {
        mn = mn.cwiseMin(points_[idx[i]]);
        mx = mx.cwiseMax(points_[idx[i]]);
    }
    int axis = 0;
    (mx - mn).maxCoeff(&axis);

    const int mid = lo + (hi - lo) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](int a, int b) {
                         const double ca = points_[a][axis], cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });

    const int node_id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{idx[mid], axis, -1, -1});
    const int left = build(idx, lo, mid);
    const int right = build(idx, mid + 1, hi);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

void KdTree3::search_nearest(int node, const Vec3& q, int& best, double& best_sq) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const Vec3& p = points_[n.point];
    const double d_sq = (p - q).squaredNorm();
    if (d_sq < best_sq || (d_sq == best_sq && n.point < best)) {
        best_sq = d_sq;
        best = n.point;
    }
    const double delta = q[n.axis] - p[n.axis];
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    search_nearest(near, q, best, best_sq);
    if (delta * delta <= best_sq) search_nearest(far, q, best, best_sq);
}

std::pair<int, double> KdTree3::nearest(const Vec3& query) const {
    int best = -1;
    double best_sq = std::numeric_limits<double>::infinity();
    search_nearest(root_, query, best, best_sq);
    return {best, best_sq};
}

void KdTree3::search_radius(int node, const Vec3& q, double r_sq, std::vector<int>& out) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const Vec3& p = points_[n.point];
    if ((p - q).squaredNorm() <= r_sq) out.push_back(n.point);
    const double delta = q[n.axis] - p[n.axis];
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    search_radius(near, q, r_sq, out);
    if (delta * delta <= r_sq) search_radius(far, q, r_sq, out);
}

std::vector<int> KdTree3::radius(const Vec3& query, double r) const {
    std::vector<int> out;
    search_radius(root_, query, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace rebrick
