#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "gsreg/errors.hpp"
#include "gsreg/kdtree.hpp"
#include "gsreg/matching_config.hpp"
#include "gsreg/relevancy.hpp"
#include "gsreg/types.hpp"

namespace gsreg {

/// Selects the feature-rich submap of a semantic map:
///   1. keep primitives with relevancy(embedding, queries) >= min_relevancy;
///   2. inflate: add any primitive whose mean lies within inflate_radius of
///      a selected mean (inflate_radius = 0 disables);
///   3. deflate: remove primitives whose nearest-neighbor distance within
///      the set exceeds median + deflate_sigma * stddev of the set's
///      nearest-neighbor distances (deflate_sigma = inf disables).
/// Returns ascending primitive indices. Deterministic for fixed inputs.
inline std::vector<std::size_t> extract_submap(const GaussianMap& map,
                                               const QuerySet& queries,
                                               const MatchConfig& cfg) {
  if (map.embedding_dim == 0) {
    throw ConfigError("extract_submap: map has no semantic embeddings");
  }
  validate(queries, map.embedding_dim);

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < map.primitives.size(); ++i) {
    if (relevancy(map.primitives[i].embedding, queries) >= cfg.min_relevancy) {
      selected.push_back(i);
    }
  }

  if (cfg.inflate_radius > 0.0 && !selected.empty()) {
    std::vector<Eigen::Vector3d> all_means;
    all_means.reserve(map.primitives.size());
    for (const auto& g : map.primitives) all_means.push_back(g.mean);
    const KdTree3 tree(all_means);
    std::vector<char> in_set(map.primitives.size(), 0);
    for (std::size_t i : selected) in_set[i] = 1;
    for (std::size_t i : selected) {
      for (std::size_t j : tree.radius_search(all_means[i], cfg.inflate_radius)) {
        in_set[j] = 1;
      }
    }
    selected.clear();
    for (std::size_t i = 0; i < in_set.size(); ++i) {
      if (in_set[i]) selected.push_back(i);
    }
  }

  if (std::isfinite(cfg.deflate_sigma) && selected.size() >= 2) {
    std::vector<Eigen::Vector3d> means;
    means.reserve(selected.size());
    for (std::size_t i : selected) means.push_back(map.primitives[i].mean);
    const KdTree3 tree(means);

    std::vector<double> nn(selected.size());
    for (std::size_t k = 0; k < selected.size(); ++k) {
      nn[k] = tree.nearest(means[k], k).second;
    }
    std::vector<double> sorted = nn;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median =
        n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double mean = 0.0;
    for (double d : nn) mean += d;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double d : nn) var += (d - mean) * (d - mean);
    const double stddev = std::sqrt(var / static_cast<double>(n));
    const double cutoff = median + cfg.deflate_sigma * stddev;

    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < selected.size(); ++k) {
      if (nn[k] <= cutoff) kept.push_back(selected[k]);
    }
    selected = std::move(kept);
  }

  if (selected.empty()) {
    throw EmptySelectionError(
        "extract_submap: no primitives left after relevancy threshold " +
        std::to_string(cfg.min_relevancy) + " and post-processing");
  }
  return selected;
}

}  // namespace gsreg
