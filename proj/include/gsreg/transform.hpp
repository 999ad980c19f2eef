#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "gsreg/types.hpp"

namespace gsreg {

/// s * R * p + t.
inline Eigen::Vector3d apply_to_point(const SimilarityTransform& t,
                                      const Eigen::Vector3d& p) {
  return t.scale * (t.rotation * p) + t.translation;
}

/// Transforms a primitive: the mean moves like a point, the orientation is
/// pre-rotated, all extents multiply by the scale. Opacity, color, and
/// embedding are carried unchanged. The resulting covariance satisfies
/// s^2 * R * Sigma * R^T.
inline GaussianPrimitive apply_to_gaussian(const SimilarityTransform& t,
                                           const GaussianPrimitive& g) {
  GaussianPrimitive out = g;
  out.mean = apply_to_point(t, g.mean);
  out.orientation = canonical_if_needed(t.rotation * g.orientation);
  out.scale = t.scale * g.scale;
  return out;
}

inline Pose apply_to_pose(const SimilarityTransform& t, const Pose& pose) {
  return Pose{apply_to_point(t, pose.origin),
              canonical_if_needed(t.rotation * pose.rotation)};
}

/// compose(A, B) applies B first, then A.
inline SimilarityTransform compose(const SimilarityTransform& a,
                                   const SimilarityTransform& b) {
  SimilarityTransform out;
  out.scale = a.scale * b.scale;
  out.rotation = canonical_if_needed(a.rotation * b.rotation);
  out.translation = a.scale * (a.rotation * b.translation) + a.translation;
  return out;
}

inline SimilarityTransform inverse(const SimilarityTransform& t) {
  SimilarityTransform out;
  out.scale = 1.0 / t.scale;
  out.rotation = canonical_if_needed(t.rotation.conjugate());
  out.translation = -(out.scale * (out.rotation * t.translation));
  return out;
}

/// Transforms every primitive of a map; frame_label is left to the caller.
inline GaussianMap apply_to_map(const SimilarityTransform& t, GaussianMap map) {
  for (auto& g : map.primitives) g = apply_to_gaussian(t, g);
  return map;
}

/// 4x4 homogeneous matrix [sR | t; 0 0 0 1].
inline Eigen::Matrix4d to_matrix(const SimilarityTransform& t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = t.scale * t.rotation.toRotationMatrix();
  m.topRightCorner<3, 1>() = t.translation;
  return m;
}

}  // namespace gsreg
