#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "gsreg/errors.hpp"
#include "gsreg/rng.hpp"
#include "gsreg/transform.hpp"
#include "gsreg/types.hpp"

namespace gsreg {

/// Parameters of a synthetic clustered scene standing in for a trained
/// splat submap.
struct SceneSpec {
  std::size_t n_gaussians = 100;
  std::size_t n_clusters = 4;
  double cluster_spread = 1.0;
  double scene_diameter = 50.0;
  std::size_t embedding_dim = 8;
  /// Per-primitive embedding noise around the cluster base embedding.
  double cluster_embedding_noise = 0.0;
  std::uint64_t seed = 0;
};

struct PerturbSpec {
  double mean_noise_sigma = 0.0;      // scene units
  double rotation_jitter_deg = 0.0;   // per-primitive orientation noise
  double outlier_fraction = 0.0;      // correspondence rewiring, see inject_outliers
  double drop_fraction = 0.0;         // per-primitive drop probability
  std::uint64_t seed = 0;
};

inline void validate(const SceneSpec& spec) {
  if (spec.n_gaussians < 1) throw ConfigError("scene: n_gaussians must be >= 1");
  if (spec.n_clusters < 1 || spec.n_clusters > spec.n_gaussians) {
    throw ConfigError("scene: need 1 <= n_clusters <= n_gaussians");
  }
  if (!(spec.cluster_spread > 0.0) || !(spec.scene_diameter > 0.0)) {
    throw ConfigError("scene: cluster_spread and scene_diameter must be positive");
  }
  if (spec.embedding_dim < 1) throw ConfigError("scene: embedding_dim must be >= 1");
  if (spec.cluster_embedding_noise < 0.0) {
    throw ConfigError("scene: cluster_embedding_noise must be nonnegative");
  }
}

inline void validate(const PerturbSpec& spec) {
  if (spec.mean_noise_sigma < 0.0 || spec.rotation_jitter_deg < 0.0) {
    throw ConfigError("perturb: noise magnitudes must be nonnegative");
  }
  if (spec.outlier_fraction < 0.0 || spec.outlier_fraction >= 1.0 ||
      spec.drop_fraction < 0.0 || spec.drop_fraction >= 1.0) {
    throw ConfigError("perturb: fractions must be in [0, 1)");
  }
}

/// Clustered scene: cluster centers inside a ball of scene_diameter / 2,
/// primitives assigned round-robin, per-cluster unit base embedding with
/// optional renormalized noise. Deterministic for a given spec.
inline GaussianMap generate_scene(const SceneSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);

  std::vector<Eigen::Vector3d> centers;
  std::vector<Eigen::VectorXd> base_embeddings;
  for (std::size_t c = 0; c < spec.n_clusters; ++c) {
    centers.push_back(rng.in_ball(spec.scene_diameter / 2.0));
    Eigen::VectorXd e = Eigen::VectorXd::NullaryExpr(
        spec.embedding_dim, [&](Eigen::Index) { return rng.normal(); });
    base_embeddings.push_back(e / e.norm());
  }

  const double log_lo = std::log(0.01 * spec.scene_diameter);
  const double log_hi = std::log(0.1 * spec.scene_diameter);

  GaussianMap map;
  map.embedding_dim = spec.embedding_dim;
  map.frame_label = "scene";
  for (std::size_t i = 0; i < spec.n_gaussians; ++i) {
    const std::size_t c = i % spec.n_clusters;
    GaussianPrimitive g;
    g.mean = centers[c] + spec.cluster_spread * rng.normal3();
    g.orientation = rng.rotation();
    g.scale = {std::exp(rng.uniform(log_lo, log_hi)),
               std::exp(rng.uniform(log_lo, log_hi)),
               std::exp(rng.uniform(log_lo, log_hi))};
    g.opacity = rng.uniform(0.05, 0.95);
    g.color_dc = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
    if (spec.cluster_embedding_noise > 0.0) {
      Eigen::VectorXd e = base_embeddings[c];
      for (Eigen::Index k = 0; k < e.size(); ++k) {
        e[k] += spec.cluster_embedding_noise * rng.normal();
      }
      g.embedding = e / e.norm();
    } else {
      g.embedding = base_embeddings[c];
    }
    map.primitives.push_back(std::move(g));
  }
  return map;
}

/// Two overlapping submaps cut from one scene.
struct SplitResult {
  GaussianMap source;  // expressed in the source frame: inverse(T_gt) applied
  GaussianMap target;  // scene frame
  /// (source index, target index) of primitives present in both maps.
  std::vector<std::pair<std::size_t, std::size_t>> shared;
};

/// Splits a map along a seeded plane with an overlap band holding
/// `overlap_fraction` of the primitives, transforms the source half by
/// inverse(T_gt) (so T_gt is the ground-truth source-to-target transform),
/// and applies drop / mean-noise / rotation-jitter perturbations to the
/// source copy.
inline SplitResult split_and_transform(const GaussianMap& map,
                                       double overlap_fraction,
                                       const SimilarityTransform& T_gt,
                                       const PerturbSpec& perturb) {
  if (map.primitives.empty()) throw ConfigError("split: map is empty");
  if (!(overlap_fraction > 0.0) || overlap_fraction > 1.0) {
    throw ConfigError("split: overlap_fraction must be in (0, 1]");
  }
  validate(perturb);
  const std::size_t n = map.primitives.size();
  const auto band_count =
      static_cast<std::size_t>(std::llround(overlap_fraction * static_cast<double>(n)));
  if (band_count == 0) {
    throw EmptySelectionError("split: overlap band is empty for this map size");
  }

  Rng rng(perturb.seed);
  const Eigen::Vector3d plane_normal = rng.unit_vector3();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> proj(n);
  for (std::size_t i = 0; i < n; ++i) proj[i] = plane_normal.dot(map.primitives[i].mean);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proj[a] != proj[b] ? proj[a] < proj[b] : a < b;
  });

  const std::size_t band_start = (n - band_count) / 2;
  std::vector<char> in_source(n, 0), in_target(n, 0), in_band(n, 0);
  for (std::size_t k = 0; k < band_start + band_count; ++k) in_source[order[k]] = 1;
  for (std::size_t k = band_start; k < n; ++k) in_target[order[k]] = 1;
  for (std::size_t k = band_start; k < band_start + band_count; ++k) {
    in_band[order[k]] = 1;
  }

  SplitResult out;
  out.target.embedding_dim = map.embedding_dim;
  out.target.frame_label = "target";
  out.source.embedding_dim = map.embedding_dim;
  out.source.frame_label = "source";

  std::vector<std::size_t> target_new(n, std::size_t(-1));
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_target[i]) continue;
    target_new[i] = out.target.primitives.size();
    out.target.primitives.push_back(map.primitives[i]);
  }

  const SimilarityTransform to_source = inverse(T_gt);
  const double jitter_rad = perturb.rotation_jitter_deg * M_PI / 180.0;
  std::vector<std::size_t> source_new(n, std::size_t(-1));
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_source[i]) continue;
    if (perturb.drop_fraction > 0.0 && rng.uniform01() < perturb.drop_fraction) {
      continue;
    }
    GaussianPrimitive g = apply_to_gaussian(to_source, map.primitives[i]);
    if (perturb.mean_noise_sigma > 0.0) {
      g.mean += perturb.mean_noise_sigma * rng.normal3();
    }
    if (jitter_rad > 0.0) {
      g.orientation = canonical(rng.rotation_with_angle(jitter_rad * rng.normal()) *
                                g.orientation);
    }
    source_new[i] = out.source.primitives.size();
    out.source.primitives.push_back(std::move(g));
  }

  for (std::size_t k = band_start; k < band_start + band_count; ++k) {
    const std::size_t i = order[k];
    if (source_new[i] != std::size_t(-1)) {
      out.shared.emplace_back(source_new[i], target_new[i]);
    }
  }
  std::sort(out.shared.begin(), out.shared.end());
  return out;
}

/// Unit-weight correspondences for every primitive present in both halves.
inline CorrespondenceSet exact_correspondences(const SplitResult& split) {
  CorrespondenceSet corr;
  for (const auto& [s, t] : split.shared) corr.pairs.push_back({s, t, 1.0});
  return corr;
}

struct OutlierInjection {
  CorrespondenceSet corr;
  /// Positions (into corr.pairs) of the rewired pairs, ascending.
  std::vector<std::size_t> outlier_pair_indices;
};

/// Rewires round(fraction * size) randomly chosen pairs to uniform-random
/// wrong target indices, recording which pairs were touched so tests can
/// assert exact exclusion.
inline OutlierInjection inject_outliers(const CorrespondenceSet& corr,
                                        double fraction, std::size_t target_count,
                                        std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw ConfigError("inject_outliers: fraction must be in [0, 1)");
  }
  if (fraction > 0.0 && target_count < 2) {
    throw ConfigError("inject_outliers: need at least two target primitives");
  }
  OutlierInjection out;
  out.corr = corr;
  const std::size_t k = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(corr.pairs.size())));
  if (k == 0) return out;

  Rng rng(seed);
  std::vector<std::size_t> slots(corr.pairs.size());
  std::iota(slots.begin(), slots.end(), 0);
  for (std::size_t d = 0; d < k; ++d) {
    const std::size_t j = d + rng.uniform_index(slots.size() - d);
    std::swap(slots[d], slots[j]);
  }
  slots.resize(k);
  std::sort(slots.begin(), slots.end());
  for (std::size_t slot : slots) {
    auto& pair = out.corr.pairs[slot];
    std::size_t wrong = pair.target_index;
    while (wrong == pair.target_index) wrong = rng.uniform_index(target_count);
    pair.target_index = wrong;
  }
  out.outlier_pair_indices = std::move(slots);
  return out;
}

/// Random camera poses in a frame A paired with their images under a_to_b;
/// stands in for the externally estimated pose correspondences consumed by
/// the fine stage.
inline std::vector<std::pair<Pose, Pose>> make_pose_pairs(
    std::size_t count, const SimilarityTransform& a_to_b, double spread, Rng& rng) {
  std::vector<std::pair<Pose, Pose>> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Pose a{rng.in_ball(spread), rng.rotation()};
    pairs.emplace_back(a, apply_to_pose(a_to_b, a));
  }
  return pairs;
}

inline SimilarityTransform random_similarity(Rng& rng, double scale_lo = 0.5,
                                             double scale_hi = 2.0,
                                             double translation_radius = 10.0) {
  return make_transform(rng.uniform(scale_lo, scale_hi), rng.rotation(),
                        rng.in_ball(translation_radius));
}

}  // namespace gsreg
