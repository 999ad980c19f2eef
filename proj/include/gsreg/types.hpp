#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gsreg/errors.hpp"

namespace gsreg {

constexpr double kUnitQuaternionTol = 1e-9;

/// Returns q normalized with the sign convention w >= 0.
inline Eigen::Quaterniond canonical(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond out = q.normalized();
  if (out.w() < 0.0) out.coeffs() = -out.coeffs();
  return out;
}

/// Like canonical(), but skips the division when the input is already unit
/// to within `tol`, preserving bit-exact round-trips of stored quaternions.
inline Eigen::Quaterniond canonical_if_needed(const Eigen::Quaterniond& q,
                                              double tol = 1e-12) {
  Eigen::Quaterniond out = q;
  if (std::abs(out.norm() - 1.0) > tol) out.normalize();
  if (out.w() < 0.0) out.coeffs() = -out.coeffs();
  return out;
}

/// One ellipsoidal splat primitive. The covariance is never stored; it is
/// reconstructed from the orientation/scale factorization on demand.
struct GaussianPrimitive {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  /// Unit quaternion, w >= 0 by convention.
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  /// Strictly positive per-axis extents (diagonal of the scaling factor).
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();
  double opacity = 1.0;  // in [0, 1]
  /// Normal triple from the splat file layout; carried through opaquely.
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
  /// DC color band.
  Eigen::Vector3d color_dc = Eigen::Vector3d::Zero();
  /// Higher-order color coefficients, carried unrotated (DC is the only
  /// rotation-invariant band; view-dependent color is not re-aligned).
  std::vector<double> color_rest;
  /// Semantic feature vector; empty when the owning map has no semantics.
  Eigen::VectorXd embedding;

  /// Full covariance H * diag(scale)^2 * H^T.
  Eigen::Matrix3d covariance() const {
    const Eigen::Matrix3d h = orientation.toRotationMatrix();
    return h * scale.cwiseProduct(scale).asDiagonal() * h.transpose();
  }
};

struct GaussianMap {
  std::vector<GaussianPrimitive> primitives;
  /// Shared embedding length; 0 means no semantics loaded.
  std::size_t embedding_dim = 0;
  /// Opaque name of the reference frame the map lives in.
  std::string frame_label;

  std::size_t size() const { return primitives.size(); }
};

/// Similarity transform (s, R, t): x -> s * R * x + t.
struct SimilarityTransform {
  double scale = 1.0;  // strictly positive
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();  // unit, w >= 0
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

inline SimilarityTransform make_transform(double scale,
                                          const Eigen::Quaterniond& rotation,
                                          const Eigen::Vector3d& translation) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("similarity transform scale must be positive and finite");
  }
  return SimilarityTransform{scale, canonical(rotation), translation};
}

inline SimilarityTransform identity_transform() { return {}; }

/// A camera pose: origin plus orientation.
struct Pose {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();  // unit
};

/// One weighted match: source primitive i corresponds to target primitive j.
struct Correspondence {
  std::size_t source_index = 0;
  std::size_t target_index = 0;
  double weight = 1.0;  // in [0, 1]; 0 is equivalent to deleting the pair
};

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;

  std::size_t size() const { return pairs.size(); }
};

// ---------------------------------------------------------------------------
// Validation

inline void validate(const GaussianPrimitive& g, std::size_t embedding_dim,
                     std::size_t index = 0) {
  if (std::abs(g.orientation.norm() - 1.0) > kUnitQuaternionTol) {
    throw ConfigError("primitive " + std::to_string(index) +
                      ": orientation quaternion is not unit length");
  }
  if (!(g.scale.array() > 0.0).all()) {
    throw ConfigError("primitive " + std::to_string(index) +
                      ": scale entries must be strictly positive");
  }
  if (!(g.opacity >= 0.0 && g.opacity <= 1.0)) {
    throw ConfigError("primitive " + std::to_string(index) +
                      ": opacity outside [0, 1]");
  }
  if (static_cast<std::size_t>(g.embedding.size()) != embedding_dim) {
    throw ConfigError("primitive " + std::to_string(index) +
                      ": embedding length " + std::to_string(g.embedding.size()) +
                      " does not match map dimension " +
                      std::to_string(embedding_dim));
  }
}

inline void validate(const GaussianMap& map) {
  for (std::size_t i = 0; i < map.primitives.size(); ++i) {
    validate(map.primitives[i], map.embedding_dim, i);
  }
}

inline void validate(const SimilarityTransform& t) {
  if (!(t.scale > 0.0) || !std::isfinite(t.scale)) {
    throw ConfigError("similarity transform scale must be positive and finite");
  }
  if (std::abs(t.rotation.norm() - 1.0) > kUnitQuaternionTol) {
    throw ConfigError("similarity transform rotation is not unit length");
  }
}

}  // namespace gsreg
