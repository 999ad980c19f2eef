#pragma once

#include <cstdint>
#include <limits>

#include "gsreg/errors.hpp"

namespace gsreg {

enum class SamplingMode {
  kUniform,
  /// Candidate draw probability proportional to the (clamped) cosine
  /// similarity between source and target embeddings.
  kSimilarityProportional,
};

struct MatchConfig {
  /// Number of target candidates sampled per source primitive.
  std::size_t m_candidates = 8;
  /// Spatial gate: only targets within this distance of the source mean are
  /// candidates. Infinity disables the gate (required when the two maps are
  /// in unrelated frames).
  double radius = std::numeric_limits<double>::infinity();
  SamplingMode sampling = SamplingMode::kSimilarityProportional;
  /// Also match target -> source and union the pairs (without duplicates).
  bool bidirectional = false;
  /// Relevancy threshold used by extract_submap.
  double min_relevancy = 0.0;
  /// Submap post-processing (see extract_submap); 0 / infinity disable.
  double inflate_radius = 0.0;
  double deflate_sigma = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

inline void validate(const MatchConfig& cfg) {
  if (cfg.m_candidates < 1) {
    throw ConfigError("match config: m_candidates must be at least 1");
  }
  if (!(cfg.radius > 0.0)) {
    throw ConfigError("match config: radius must be positive (or infinite)");
  }
  if (cfg.min_relevancy < 0.0 || cfg.min_relevancy > 1.0) {
    throw ConfigError("match config: min_relevancy must be in [0, 1]");
  }
  if (cfg.inflate_radius < 0.0) {
    throw ConfigError("match config: inflate_radius must be nonnegative");
  }
  if (cfg.deflate_sigma < 0.0) {
    throw ConfigError("match config: deflate_sigma must be nonnegative");
  }
}

}  // namespace gsreg
