#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace gsreg {

/// Static 3-d KD-tree over a point set. Built once, queried read-only, so a
/// single tree can serve concurrent queries. Radius results are returned in
/// ascending index order to keep downstream consumers deterministic.
class KdTree3 {
 public:
  KdTree3() = default;

  explicit KdTree3(std::vector<Eigen::Vector3d> points)
      : points_(std::move(points)), nodes_(points_.size()) {
    order_.resize(points_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!order_.empty()) root_ = build(0, order_.size());
  }

  std::size_t size() const { return points_.size(); }

  /// Indices of all points with ||p - center|| <= radius, ascending.
  std::vector<std::size_t> radius_search(const Eigen::Vector3d& center,
                                         double radius) const {
    std::vector<std::size_t> out;
    if (points_.empty()) return out;
    if (!std::isfinite(radius)) {
      out = order_;
      std::sort(out.begin(), out.end());
      return out;
    }
    search_radius(root_, center, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Nearest point to q, optionally excluding one index (used for
  /// nearest-neighbor-within-set statistics). Returns {index, distance}.
  std::pair<std::size_t, double> nearest(
      const Eigen::Vector3d& q,
      std::optional<std::size_t> exclude = std::nullopt) const {
    std::size_t best = std::size_t(-1);
    double best_d2 = std::numeric_limits<double>::infinity();
    search_nearest(root_, q, exclude, best, best_d2);
    return {best, std::sqrt(best_d2)};
  }

 private:
  struct Node {
    std::size_t point = 0;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::size_t lo, std::size_t hi) {
    Eigen::Vector3d mn = points_[order_[lo]];
    Eigen::Vector3d mx = mn;
    for (std::size_t k = lo + 1; k < hi; ++k) {
      mn = mn.cwiseMin(points_[order_[k]]);
      mx = mx.cwiseMax(points_[order_[k]]);
    }
    int axis = 0;
    (mx - mn).maxCoeff(&axis);

    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid,
                     order_.begin() + hi, [&](std::size_t a, std::size_t b) {
                       const double pa = points_[a][axis];
                       const double pb = points_[b][axis];
                       return pa < pb || (pa == pb && a < b);
                     });

    const int node_id = next_node_++;
    Node& node = nodes_[node_id];
    node.point = order_[mid];
    node.axis = axis;
    if (lo < mid) node.left = build(lo, mid);
    if (mid + 1 < hi) node.right = build(mid + 1, hi);
    return node_id;
  }

  void search_radius(int node_id, const Eigen::Vector3d& center, double r2,
                     std::vector<std::size_t>& out) const {
    if (node_id < 0) return;
    const Node& node = nodes_[node_id];
    const Eigen::Vector3d& p = points_[node.point];
    if ((p - center).squaredNorm() <= r2) out.push_back(node.point);
    const double gap = center[node.axis] - p[node.axis];
    if (gap <= 0.0 || gap * gap <= r2) search_radius(node.left, center, r2, out);
    if (gap >= 0.0 || gap * gap <= r2) search_radius(node.right, center, r2, out);
  }

  void search_nearest(int node_id, const Eigen::Vector3d& q,
                      std::optional<std::size_t> exclude, std::size_t& best,
                      double& best_d2) const {
    if (node_id < 0) return;
    const Node& node = nodes_[node_id];
    const Eigen::Vector3d& p = points_[node.point];
    const double d2 = (q - p).squaredNorm();
    if ((!exclude || node.point != *exclude) &&
        (d2 < best_d2 || (d2 == best_d2 && node.point < best))) {
      best = node.point;
      best_d2 = d2;
    }
    const double gap = q[node.axis] - p[node.axis];
    const int near = gap <= 0.0 ? node.left : node.right;
    const int far = gap <= 0.0 ? node.right : node.left;
    search_nearest(near, q, exclude, best, best_d2);
    if (gap * gap <= best_d2) search_nearest(far, q, exclude, best, best_d2);
  }

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> order_;
  int root_ = -1;
  int next_node_ = 0;
};

/// Median nearest-neighbor spacing of a point set (at least two points).
inline double median_nn_spacing(const KdTree3& tree,
                                const std::vector<Eigen::Vector3d>& points) {
  std::vector<double> dists;
  dists.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    dists.push_back(tree.nearest(points[i], i).second);
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t n = dists.size();
  return n % 2 == 1 ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
}

}  // namespace gsreg
