#pragma once

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gsreg/errors.hpp"

namespace gsreg {

// Semantic sidecar: magic "GSEM" | version:u32 | count:u64 | dim:u32 |
// row-major float32[count][dim], all little-endian. Keeping embeddings out
// of the PLY lets standard splat viewers open the geometry file.

static_assert(std::endian::native == std::endian::little,
              "binary readers/writers assume a little-endian host");

namespace detail {

inline std::string read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

inline void write_binary_file(const std::filesystem::path& path,
                              const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

template <class T>
void append_le(std::string& buf, T value) {
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  buf.append(raw, sizeof(T));
}

template <class T>
T load_le(const char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  return value;
}

}  // namespace detail

inline constexpr char kSidecarMagic[4] = {'G', 'S', 'E', 'M'};
inline constexpr std::uint32_t kSidecarVersion = 1;

inline void write_sidecar(const std::filesystem::path& path,
                          const std::vector<Eigen::VectorXd>& rows,
                          std::size_t dim) {
  if (dim == 0) throw ConfigError("sidecar dimension must be at least 1");
  std::string buf;
  buf.append(kSidecarMagic, 4);
  detail::append_le(buf, kSidecarVersion);
  detail::append_le(buf, static_cast<std::uint64_t>(rows.size()));
  detail::append_le(buf, static_cast<std::uint32_t>(dim));
  for (const auto& row : rows) {
    if (static_cast<std::size_t>(row.size()) != dim) {
      throw ConfigError("sidecar row length does not match dimension");
    }
    for (Eigen::Index k = 0; k < row.size(); ++k) {
      const float f = static_cast<float>(row[k]);
      if (!std::isfinite(f)) {
        throw ConfigError("sidecar value does not fit float32 storage");
      }
      detail::append_le(buf, f);
    }
  }
  detail::write_binary_file(path, buf);
}

inline std::vector<Eigen::VectorXd> read_sidecar(
    const std::filesystem::path& path, std::size_t* dim_out = nullptr) {
  const std::string bytes = detail::read_binary_file(path);
  constexpr std::size_t kHeader = 4 + 4 + 8 + 4;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), kSidecarMagic, 4) != 0) {
    throw IoError(path.string() + ": not a GSEM sidecar");
  }
  const auto version = detail::load_le<std::uint32_t>(bytes.data() + 4);
  if (version != kSidecarVersion) {
    throw IoError(path.string() + ": unsupported sidecar version " +
                  std::to_string(version));
  }
  const auto count = detail::load_le<std::uint64_t>(bytes.data() + 8);
  const auto dim = detail::load_le<std::uint32_t>(bytes.data() + 16);
  if (dim == 0) throw IoError(path.string() + ": sidecar dimension is 0");
  if (bytes.size() != kHeader + count * dim * sizeof(float)) {
    throw IoError(path.string() + ": payload size does not match count " +
                  std::to_string(count) + " x dim " + std::to_string(dim));
  }
  std::vector<Eigen::VectorXd> rows(count, Eigen::VectorXd(dim));
  const char* p = bytes.data() + kHeader;
  for (std::uint64_t i = 0; i < count; ++i) {
    for (std::uint32_t k = 0; k < dim; ++k, p += sizeof(float)) {
      const float f = detail::load_le<float>(p);
      if (!std::isfinite(f)) {
        throw IoError(path.string() + ": non-finite value at row " +
                      std::to_string(i));
      }
      rows[i][k] = f;
    }
  }
  if (dim_out) *dim_out = dim;
  return rows;
}

}  // namespace gsreg
