#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

#include "gsreg/types.hpp"

namespace gsreg {

/// Geometric registration errors against ground truth: rotation error in
/// geodesic degrees, Euclidean translation gap, relative scale gap.
struct GeometricMetrics {
  double rotation_error_deg = 0.0;
  double translation_error = 0.0;
  double scale_error = 0.0;
};

/// Geodesic angle between two rotations, in degrees:
/// acos((trace(R1^T R2) - 1) / 2), evaluated as atan2(|skew(rel)|, cos) so
/// near-zero angles keep full precision instead of the sqrt(eps) floor of a
/// bare acos.
inline double rotation_geodesic_deg(const Eigen::Quaterniond& a,
                                    const Eigen::Quaterniond& b) {
  const Eigen::Matrix3d rel = a.toRotationMatrix().transpose() * b.toRotationMatrix();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  const Eigen::Vector3d skew(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0),
                             rel(1, 0) - rel(0, 1));
  return std::atan2(0.5 * skew.norm(), c) * 180.0 / M_PI;
}

inline GeometricMetrics metrics(const SimilarityTransform& est,
                                const SimilarityTransform& gt) {
  GeometricMetrics out;
  out.rotation_error_deg = rotation_geodesic_deg(est.rotation, gt.rotation);
  out.translation_error = (est.translation - gt.translation).norm();
  out.scale_error = std::abs(est.scale / gt.scale - 1.0);
  return out;
}

}  // namespace gsreg
