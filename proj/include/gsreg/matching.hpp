#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gsreg/errors.hpp"
#include "gsreg/kdtree.hpp"
#include "gsreg/matching_config.hpp"
#include "gsreg/relevancy.hpp"
#include "gsreg/rng.hpp"
#include "gsreg/types.hpp"

namespace gsreg {

namespace detail {

/// Draws up to m distinct entries from `candidates`, either uniformly or
/// proportional to `weights` (entries with weight 0 are never drawn while a
/// positive-weight candidate remains; if every weight is 0 the draw falls
/// back to uniform).
inline std::vector<std::size_t> sample_candidates(
    const std::vector<std::size_t>& candidates, const std::vector<double>& weights,
    SamplingMode mode, std::size_t m, Rng& rng) {
  std::vector<std::size_t> picked;
  if (candidates.empty()) return picked;

  if (mode == SamplingMode::kUniform) {
    std::vector<std::size_t> pool = candidates;
    const std::size_t k = std::min(m, pool.size());
    for (std::size_t d = 0; d < k; ++d) {
      const std::size_t j = d + rng.uniform_index(pool.size() - d);
      std::swap(pool[d], pool[j]);
      picked.push_back(pool[d]);
    }
    return picked;
  }

  std::vector<std::size_t> pool;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (weights[k] > 0.0) {
      pool.push_back(candidates[k]);
      w.push_back(weights[k]);
      total += weights[k];
    }
  }
  if (pool.empty()) {
    return sample_candidates(candidates, weights, SamplingMode::kUniform, m, rng);
  }
  const std::size_t k = std::min(m, pool.size());
  for (std::size_t d = 0; d < k; ++d) {
    double x = rng.uniform01() * total;
    std::size_t chosen = pool.size() - 1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (w[i] <= 0.0) continue;
      x -= w[i];
      if (x < 0.0) {
        chosen = i;
        break;
      }
    }
    picked.push_back(pool[chosen]);
    total -= w[chosen];
    w[chosen] = 0.0;
  }
  return picked;
}

}  // namespace detail

/// Matches primitives across two semantic maps: for every source index,
/// samples up to cfg.m_candidates targets inside the spatial gate, weighting
/// each produced pair by clamp(cos(e_src, e_tgt), 0, 1). With
/// cfg.bidirectional the target->source direction is added and the union is
/// deduplicated. Per-primitive RNG streams are derived from (seed,
/// direction, primitive index), so the result is independent of evaluation
/// order; pairs are returned sorted by (source, target).
inline CorrespondenceSet match(const GaussianMap& source, const GaussianMap& target,
                               std::span<const std::size_t> source_idx,
                               std::span<const std::size_t> target_idx,
                               const MatchConfig& cfg) {
  validate(cfg);
  if (source.embedding_dim == 0 || source.embedding_dim != target.embedding_dim) {
    throw ConfigError("match: maps must share a nonzero embedding dimension");
  }
  if (source_idx.empty() || target_idx.empty()) {
    throw ConfigError("match: index lists must be nonempty");
  }

  const auto gather = [](const GaussianMap& map, std::span<const std::size_t> idx) {
    std::vector<Eigen::Vector3d> means;
    means.reserve(idx.size());
    for (std::size_t i : idx) {
      if (i >= map.primitives.size()) {
        throw ConfigError("match: index " + std::to_string(i) + " out of range");
      }
      means.push_back(map.primitives[i].mean);
    }
    return means;
  };

  CorrespondenceSet out;
  const auto run_direction = [&](const GaussianMap& from, const GaussianMap& to,
                                 std::span<const std::size_t> from_idx,
                                 std::span<const std::size_t> to_idx,
                                 std::uint64_t direction_tag, bool swapped) {
    const KdTree3 tree(gather(to, to_idx));
    std::vector<std::size_t> candidates;
    std::vector<double> weights;
    for (std::size_t fi : from_idx) {
      const auto& g = from.primitives[fi];
      const auto local = tree.radius_search(g.mean, cfg.radius);
      if (local.empty()) continue;
      candidates.clear();
      weights.clear();
      for (std::size_t li : local) {
        const std::size_t ti = to_idx[li];
        candidates.push_back(ti);
        weights.push_back(std::clamp(
            cosine_similarity(g.embedding, to.primitives[ti].embedding), 0.0, 1.0));
      }
      Rng rng = derived_rng(cfg.seed, {direction_tag, fi});
      for (std::size_t ti :
           detail::sample_candidates(candidates, weights, cfg.sampling,
                                     cfg.m_candidates, rng)) {
        const double w = std::clamp(
            cosine_similarity(g.embedding, to.primitives[ti].embedding), 0.0, 1.0);
        if (swapped) {
          out.pairs.push_back({ti, fi, w});
        } else {
          out.pairs.push_back({fi, ti, w});
        }
      }
    }
  };

  run_direction(source, target, source_idx, target_idx, 0, false);
  if (cfg.bidirectional) {
    run_direction(target, source, target_idx, source_idx, 1, true);
  }

  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) {
    return a.source_index != b.source_index ? a.source_index < b.source_index
                                            : a.target_index < b.target_index;
  });
  out.pairs.erase(std::unique(out.pairs.begin(), out.pairs.end(),
                              [](const auto& a, const auto& b) {
                                return a.source_index == b.source_index &&
                                       a.target_index == b.target_index;
                              }),
                  out.pairs.end());

  if (out.pairs.empty()) {
    throw EmptySelectionError(
        "match: no target candidates found for any source primitive within "
        "gate radius " +
        std::to_string(cfg.radius));
  }
  return out;
}

}  // namespace gsreg
