#pragma once

#include <filesystem>
#include <optional>

#include "gsreg/errors.hpp"
#include "gsreg/ply_io.hpp"
#include "gsreg/sidecar_io.hpp"
#include "gsreg/types.hpp"

namespace gsreg {

/// Loads geometry from a splat PLY and, when given, semantics from a GSEM
/// sidecar. Primitive order equals vertex order on disk.
inline GaussianMap read_map(
    const std::filesystem::path& ply_path,
    const std::optional<std::filesystem::path>& sidecar_path = std::nullopt,
    PlyReadStats* stats = nullptr) {
  GaussianMap map = read_splat_ply(ply_path, stats);
  map.frame_label = ply_path.stem().string();
  if (sidecar_path) {
    std::size_t dim = 0;
    auto rows = read_sidecar(*sidecar_path, &dim);
    if (rows.size() != map.primitives.size()) {
      throw IoError("sidecar " + sidecar_path->string() + " has " +
                    std::to_string(rows.size()) + " rows but PLY " +
                    ply_path.string() + " has " +
                    std::to_string(map.primitives.size()) + " vertices");
    }
    map.embedding_dim = dim;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      map.primitives[i].embedding = std::move(rows[i]);
    }
  }
  return map;
}

inline void write_map(
    const GaussianMap& map, const std::filesystem::path& ply_path,
    const std::optional<std::filesystem::path>& sidecar_path = std::nullopt) {
  if (sidecar_path && map.embedding_dim == 0) {
    throw ConfigError("map has no semantic embeddings; nothing to write to " +
                      sidecar_path->string());
  }
  write_splat_ply(map, ply_path);
  if (sidecar_path) {
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(map.primitives.size());
    for (const auto& g : map.primitives) rows.push_back(g.embedding);
    write_sidecar(*sidecar_path, rows, map.embedding_dim);
  }
}

}  // namespace gsreg
