#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "gsreg/errors.hpp"
#include "gsreg/sidecar_io.hpp"
#include "gsreg/types.hpp"

namespace gsreg {

// Conventional splat PLY: binary_little_endian 1.0, a single vertex element
// with float32 properties in the exact order
//   x y z nx ny nz f_dc_0..2 f_rest_0..(3k-1) opacity scale_0..2 rot_0..3
// where rot is a wxyz quaternion, scale_* holds log-extents, and opacity
// holds a pre-sigmoid logit. The loader converts to natural units (exp /
// sigmoid) so in-memory invariants are directly checkable; the writer
// inverts the conversion.

struct PlyReadStats {
  /// Vertices whose rot quaternion deviated from unit length by more than
  /// float32 quantization and had to be renormalized.
  std::size_t normalized_quaternions = 0;
};

namespace detail {

// Logits beyond this collapse to exactly 0/1 in double sigmoid; the writer
// clamps so the emitted float stays finite and read/write stable.
inline constexpr double kMaxOpacityLogit = 40.0;

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

inline double logit_clamped(double p) {
  if (p <= 0.0) return -kMaxOpacityLogit;
  if (p >= 1.0) return kMaxOpacityLogit;
  const double l = std::log(p / (1.0 - p));
  return std::clamp(l, -kMaxOpacityLogit, kMaxOpacityLogit);
}

/// Drives `step` to a fixpoint. The round-to-float32 projections below can
/// oscillate between two values one ulp apart; a 2-cycle resolves to the
/// bytewise-smaller element so that both entry points agree.
template <class T, class Step>
T fixpoint_f32(T v, Step step) {
  T prev = v;
  for (int i = 0; i < 16; ++i) {
    const T next = step(v);
    if (std::memcmp(&next, &v, sizeof(T)) == 0) return v;
    if (i > 0 && std::memcmp(&next, &prev, sizeof(T)) == 0) {
      return std::memcmp(&v, &next, sizeof(T)) < 0 ? v : next;
    }
    prev = v;
    v = next;
  }
  return v;
}

/// Float32 value that survives load(decode) -> store(encode) unchanged.
template <class Enc, class Dec>
float stable_f32(double value, Enc encode, Dec decode) {
  return fixpoint_f32(static_cast<float>(encode(value)), [&](float v) {
    return static_cast<float>(encode(decode(static_cast<double>(v))));
  });
}

/// True iff the loader (normalize in double, round to float32) reproduces v.
inline bool quat_f32_roundtrips(const std::array<float, 4>& v) {
  const Eigen::Quaterniond u = canonical(Eigen::Quaterniond(v[0], v[1], v[2], v[3]));
  return static_cast<float>(u.w()) == v[0] && static_cast<float>(u.x()) == v[1] &&
         static_cast<float>(u.y()) == v[2] && static_cast<float>(u.z()) == v[3];
}

/// Float32 quaternion that survives load-normalize-store unchanged.
///
/// Plain rounding of a unit quaternion leaves a norm offset of up to ~6e-8,
/// and re-normalizing then shifts small components across their (much finer)
/// rounding boundaries — iterating does not converge. Instead, search ±1-ulp
/// nudges of the rounded components for a combination whose float norm is
/// close enough to 1 that normalization rounds back exactly. The nudge is
/// below quantization noise, and an already-stable quaternion (anything this
/// writer produced before) passes the check immediately, unchanged.
inline std::array<float, 4> stable_unit_quat_f32(const Eigen::Quaterniond& q) {
  const Eigen::Quaterniond qc = canonical(q);
  const std::array<float, 4> base = {
      static_cast<float>(qc.w()), static_cast<float>(qc.x()),
      static_cast<float>(qc.y()), static_cast<float>(qc.z())};
  if (quat_f32_roundtrips(base)) return base;

  std::array<float, 4> candidate = base;
  for (int mask = 1; mask < 81; ++mask) {
    int m = mask;
    for (int i = 0; i < 4; ++i, m /= 3) {
      const int nudge = m % 3;  // 0: keep, 1: toward zero, 2: away from zero
      if (nudge == 0) {
        candidate[i] = base[i];
      } else {
        const float dir = (nudge == 1) == (base[i] > 0.0f)
                              ? -std::numeric_limits<float>::infinity()
                              : std::numeric_limits<float>::infinity();
        candidate[i] = std::nextafterf(base[i], dir);
      }
    }
    if (candidate[0] >= 0.0f && quat_f32_roundtrips(candidate)) return candidate;
  }
  return base;  // no stable neighbor found; keep the faithful rounding
}

inline float checked_f32(double v, const char* what) {
  const float f = static_cast<float>(v);
  if (!std::isfinite(f)) {
    throw ConfigError(std::string(what) + " does not fit float32 storage");
  }
  return f;
}

}  // namespace detail

inline void write_splat_ply(const GaussianMap& map,
                            const std::filesystem::path& path) {
  std::size_t rest_count = 0;
  for (const auto& g : map.primitives) {
    rest_count = std::max(rest_count, g.color_rest.size());
  }
  rest_count = (rest_count + 2) / 3 * 3;  // whole color channels

  std::string header;
  header += "ply\nformat binary_little_endian 1.0\n";
  header += "element vertex " + std::to_string(map.primitives.size()) + "\n";
  for (const char* n : {"x", "y", "z", "nx", "ny", "nz"}) {
    header += std::string("property float ") + n + "\n";
  }
  for (int k = 0; k < 3; ++k) {
    header += "property float f_dc_" + std::to_string(k) + "\n";
  }
  for (std::size_t k = 0; k < rest_count; ++k) {
    header += "property float f_rest_" + std::to_string(k) + "\n";
  }
  header += "property float opacity\n";
  for (int k = 0; k < 3; ++k) {
    header += "property float scale_" + std::to_string(k) + "\n";
  }
  for (int k = 0; k < 4; ++k) {
    header += "property float rot_" + std::to_string(k) + "\n";
  }
  header += "end_header\n";

  std::string buf = header;
  buf.reserve(header.size() + map.primitives.size() * (17 + rest_count) * 4);
  const auto log_enc = [](double s) { return std::log(s); };
  const auto exp_dec = [](double l) { return std::exp(l); };
  const auto logit_enc = [](double p) { return detail::logit_clamped(p); };
  const auto sig_dec = [](double l) { return detail::sigmoid(l); };
  for (std::size_t i = 0; i < map.primitives.size(); ++i) {
    const auto& g = map.primitives[i];
    const char* ctx = "primitive value";
    for (int k = 0; k < 3; ++k) detail::append_le(buf, detail::checked_f32(g.mean[k], ctx));
    for (int k = 0; k < 3; ++k) detail::append_le(buf, detail::checked_f32(g.normal[k], ctx));
    for (int k = 0; k < 3; ++k) detail::append_le(buf, detail::checked_f32(g.color_dc[k], ctx));
    for (std::size_t k = 0; k < rest_count; ++k) {
      const double v = k < g.color_rest.size() ? g.color_rest[k] : 0.0;
      detail::append_le(buf, detail::checked_f32(v, ctx));
    }
    detail::append_le(buf, detail::stable_f32(g.opacity, logit_enc, sig_dec));
    for (int k = 0; k < 3; ++k) {
      if (!(g.scale[k] > 0.0)) {
        throw ConfigError("primitive " + std::to_string(i) + ": nonpositive scale");
      }
      detail::append_le(buf, detail::stable_f32(g.scale[k], log_enc, exp_dec));
    }
    for (float c : detail::stable_unit_quat_f32(g.orientation)) {
      detail::append_le(buf, c);
    }
  }
  detail::write_binary_file(path, buf);
}

inline GaussianMap read_splat_ply(const std::filesystem::path& path,
                                  PlyReadStats* stats = nullptr) {
  const std::string bytes = detail::read_binary_file(path);

  // --- header ---
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string_view {
    const auto end = bytes.find('\n', pos);
    if (end == std::string::npos) {
      throw IoError(path.string() + ": unterminated header");
    }
    std::string_view line(bytes.data() + pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };
  if (next_line() != "ply") throw IoError(path.string() + ": not a PLY file");
  if (next_line() != "format binary_little_endian 1.0") {
    throw IoError(path.string() + ": expected binary_little_endian 1.0");
  }

  std::size_t vertex_count = 0;
  bool have_element = false;
  std::vector<std::string> props;
  while (true) {
    const std::string_view line = next_line();
    if (line == "end_header") break;
    if (line.substr(0, 8) == "comment ") continue;
    if (line.substr(0, 15) == "element vertex ") {
      if (have_element) throw IoError(path.string() + ": multiple vertex elements");
      vertex_count = std::stoull(std::string(line.substr(15)));
      have_element = true;
      continue;
    }
    if (line.substr(0, 8) == "element ") {
      throw IoError(path.string() + ": unsupported element '" +
                    std::string(line.substr(8)) + "'");
    }
    if (line.substr(0, 15) == "property float ") {
      if (!have_element) {
        throw IoError(path.string() + ": property before vertex element");
      }
      props.emplace_back(line.substr(15));
      continue;
    }
    throw IoError(path.string() + ": unexpected header line '" +
                  std::string(line) + "'");
  }
  if (!have_element) throw IoError(path.string() + ": missing vertex element");
  if (props.size() < 17) {
    throw IoError(path.string() + ": expected at least 17 float properties");
  }
  const std::size_t rest_count = props.size() - 17;
  if (rest_count % 3 != 0) {
    throw IoError(path.string() + ": f_rest property count is not a multiple of 3");
  }
  std::vector<std::string> expected = {"x", "y", "z", "nx", "ny", "nz",
                                       "f_dc_0", "f_dc_1", "f_dc_2"};
  for (std::size_t k = 0; k < rest_count; ++k) {
    expected.push_back("f_rest_" + std::to_string(k));
  }
  for (const char* n : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0",
                        "rot_1", "rot_2", "rot_3"}) {
    expected.emplace_back(n);
  }
  if (props != expected) {
    throw IoError(path.string() + ": property layout does not match the splat convention");
  }

  // --- payload ---
  const std::size_t stride = (17 + rest_count) * sizeof(float);
  const std::size_t payload = bytes.size() - pos;
  if (payload != vertex_count * stride) {
    throw IoError(path.string() + ": header declares " +
                  std::to_string(vertex_count) + " vertices (" +
                  std::to_string(vertex_count * stride) + " bytes) but payload has " +
                  std::to_string(payload) + " bytes");
  }

  GaussianMap map;
  map.primitives.resize(vertex_count);
  const char* p = bytes.data() + pos;
  std::vector<float> rec(17 + rest_count);
  for (std::size_t i = 0; i < vertex_count; ++i, p += stride) {
    std::memcpy(rec.data(), p, stride);
    for (std::size_t k = 0; k < rec.size(); ++k) {
      if (!std::isfinite(rec[k])) {
        throw IoError(path.string() + ": non-finite value at vertex " +
                      std::to_string(i) + " (property " + expected[k] + ")");
      }
    }
    GaussianPrimitive& g = map.primitives[i];
    g.mean = {rec[0], rec[1], rec[2]};
    g.normal = {rec[3], rec[4], rec[5]};
    g.color_dc = {rec[6], rec[7], rec[8]};
    g.color_rest.assign(rec.begin() + 9, rec.begin() + 9 + rest_count);
    const std::size_t base = 9 + rest_count;
    g.opacity = detail::sigmoid(rec[base]);
    for (int k = 0; k < 3; ++k) {
      g.scale[k] = std::exp(static_cast<double>(rec[base + 1 + k]));
      if (!(g.scale[k] > 0.0) || !std::isfinite(g.scale[k])) {
        throw IoError(path.string() + ": vertex " + std::to_string(i) +
                      ": stored log-scale out of range");
      }
    }
    const Eigen::Quaterniond q(rec[base + 4], rec[base + 5], rec[base + 6],
                               rec[base + 7]);
    const double norm = q.norm();
    if (norm < 1e-12) {
      throw IoError(path.string() + ": vertex " + std::to_string(i) +
                    ": zero rot quaternion");
    }
    // Float32 quantization of a unit quaternion lands within ~1e-7 of unit
    // norm; anything worse counts as genuinely unnormalized input.
    if (std::abs(norm - 1.0) > 1e-3 && stats) ++stats->normalized_quaternions;
    g.orientation = canonical(q);
  }
  return map;
}

}  // namespace gsreg
