#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gsreg/errors.hpp"
#include "gsreg/metrics.hpp"
#include "gsreg/transform.hpp"
#include "gsreg/types.hpp"

namespace gsreg {

/// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view token, const std::string& context) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw IoError(context + ": cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

/// Splits a line into whitespace-separated tokens, dropping '#' comments.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r'))
      ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '\r')
      ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

/// Invokes fn(line_number, tokens) for every non-empty, non-comment line.
template <class Fn>
void for_each_data_line(const std::string& text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto len = (end == std::string::npos ? text.size() : end) - pos;
    ++line_no;
    const auto tokens = tokenize(std::string_view(text).substr(pos, len));
    if (!tokens.empty()) fn(line_no, tokens);
    if (end == std::string::npos) break;
    pos = end + 1;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pose-pair files: one pair per line, 14 numbers
// (origin xyz, quaternion wxyz) for the first frame then the second.

inline void write_pose_pairs(const std::filesystem::path& path,
                             const std::vector<std::pair<Pose, Pose>>& pairs) {
  std::string out;
  for (const auto& [a, b] : pairs) {
    for (const Pose* p : {&a, &b}) {
      out += format_double(p->origin.x()) + ' ' + format_double(p->origin.y()) +
             ' ' + format_double(p->origin.z()) + ' ' +
             format_double(p->rotation.w()) + ' ' + format_double(p->rotation.x()) +
             ' ' + format_double(p->rotation.y()) + ' ' +
             format_double(p->rotation.z());
      out += p == &a ? " " : "\n";
    }
  }
  detail::write_text_file(path, out);
}

inline std::vector<std::pair<Pose, Pose>> read_pose_pairs(
    const std::filesystem::path& path) {
  const std::string text = detail::read_text_file(path);
  std::vector<std::pair<Pose, Pose>> pairs;
  detail::for_each_data_line(text, [&](std::size_t line_no, const auto& tokens) {
    if (tokens.size() != 14) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected 14 fields, found " + std::to_string(tokens.size()));
    }
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    double v[14];
    for (int i = 0; i < 14; ++i) {
      v[i] = parse_double(tokens[i], ctx);
      if (!std::isfinite(v[i])) throw IoError(ctx + ": non-finite value");
    }
    auto make_pose = [&](const double* f) {
      const Eigen::Quaterniond q(f[3], f[4], f[5], f[6]);
      if (q.norm() < 1e-12) throw IoError(ctx + ": zero quaternion");
      return Pose{{f[0], f[1], f[2]}, canonical_if_needed(q)};
    };
    pairs.emplace_back(make_pose(v), make_pose(v + 7));
  });
  return pairs;
}

// ---------------------------------------------------------------------------
// Correspondence files: "source_index target_index weight" per line.

inline void write_correspondences(const std::filesystem::path& path,
                                  const CorrespondenceSet& corr) {
  std::string out;
  for (const auto& c : corr.pairs) {
    out += std::to_string(c.source_index) + ' ' + std::to_string(c.target_index) +
           ' ' + format_double(c.weight) + '\n';
  }
  detail::write_text_file(path, out);
}

inline CorrespondenceSet read_correspondences(const std::filesystem::path& path) {
  const std::string text = detail::read_text_file(path);
  CorrespondenceSet corr;
  detail::for_each_data_line(text, [&](std::size_t line_no, const auto& tokens) {
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    if (tokens.size() != 3) {
      throw IoError(ctx + ": expected 3 fields, found " +
                    std::to_string(tokens.size()));
    }
    Correspondence c;
    unsigned long long i = 0, j = 0;
    for (int t = 0; t < 2; ++t) {
      auto& dst = t == 0 ? i : j;
      const auto tok = tokens[t];
      const auto res =
          std::from_chars(tok.data(), tok.data() + tok.size(), dst);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw IoError(ctx + ": cannot parse index '" + std::string(tok) + "'");
      }
    }
    c.source_index = i;
    c.target_index = j;
    c.weight = parse_double(tokens[2], ctx);
    if (!std::isfinite(c.weight) || c.weight < 0.0 || c.weight > 1.0) {
      throw IoError(ctx + ": weight outside [0, 1]");
    }
    corr.pairs.push_back(c);
  });
  return corr;
}

// ---------------------------------------------------------------------------
// Transform result files: key/value text, exact float round-trip.

struct TransformRecord {
  SimilarityTransform transform;
  std::optional<double> objective;
  std::optional<std::size_t> inlier_count;
  std::optional<GeometricMetrics> metrics;
};

inline void write_transform(const std::filesystem::path& path,
                            const TransformRecord& record) {
  const SimilarityTransform& t = record.transform;
  std::string out;
  out += "scale " + format_double(t.scale) + '\n';
  out += "rotation_wxyz " + format_double(t.rotation.w()) + ' ' +
         format_double(t.rotation.x()) + ' ' + format_double(t.rotation.y()) +
         ' ' + format_double(t.rotation.z()) + '\n';
  out += "translation " + format_double(t.translation.x()) + ' ' +
         format_double(t.translation.y()) + ' ' +
         format_double(t.translation.z()) + '\n';
  const Eigen::Matrix4d m = to_matrix(t);
  out += "matrix";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out += ' ' + format_double(m(r, c));
  }
  out += '\n';
  if (record.objective) out += "objective " + format_double(*record.objective) + '\n';
  if (record.inlier_count) {
    out += "inlier_count " + std::to_string(*record.inlier_count) + '\n';
  }
  if (record.metrics) {
    out += "re_deg " + format_double(record.metrics->rotation_error_deg) + '\n';
    out += "te " + format_double(record.metrics->translation_error) + '\n';
    out += "se " + format_double(record.metrics->scale_error) + '\n';
  }
  detail::write_text_file(path, out);
}

inline TransformRecord read_transform(const std::filesystem::path& path) {
  const std::string text = detail::read_text_file(path);
  TransformRecord rec;
  bool have_scale = false, have_rot = false, have_trans = false;
  GeometricMetrics metrics{};
  int metric_fields = 0;
  detail::for_each_data_line(text, [&](std::size_t line_no, const auto& tokens) {
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    const std::string_view key = tokens[0];
    auto need = [&](std::size_t n) {
      if (tokens.size() != n + 1) {
        throw IoError(ctx + ": key '" + std::string(key) + "' expects " +
                      std::to_string(n) + " values");
      }
    };
    if (key == "scale") {
      need(1);
      rec.transform.scale = parse_double(tokens[1], ctx);
      have_scale = true;
    } else if (key == "rotation_wxyz") {
      need(4);
      rec.transform.rotation =
          Eigen::Quaterniond(parse_double(tokens[1], ctx), parse_double(tokens[2], ctx),
                             parse_double(tokens[3], ctx), parse_double(tokens[4], ctx));
      have_rot = true;
    } else if (key == "translation") {
      need(3);
      rec.transform.translation = {parse_double(tokens[1], ctx),
                                   parse_double(tokens[2], ctx),
                                   parse_double(tokens[3], ctx)};
      have_trans = true;
    } else if (key == "matrix") {
      need(16);  // informational; the transform is reconstructed from s, q, t
    } else if (key == "objective") {
      need(1);
      rec.objective = parse_double(tokens[1], ctx);
    } else if (key == "inlier_count") {
      need(1);
      unsigned long long n = 0;
      const auto tok = tokens[1];
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), n);
      if (res.ec != std::errc()) throw IoError(ctx + ": bad inlier_count");
      rec.inlier_count = n;
    } else if (key == "re_deg") {
      need(1);
      metrics.rotation_error_deg = parse_double(tokens[1], ctx);
      ++metric_fields;
    } else if (key == "te") {
      need(1);
      metrics.translation_error = parse_double(tokens[1], ctx);
      ++metric_fields;
    } else if (key == "se") {
      need(1);
      metrics.scale_error = parse_double(tokens[1], ctx);
      ++metric_fields;
    } else {
      throw IoError(ctx + ": unknown key '" + std::string(key) + "'");
    }
  });
  if (!have_scale || !have_rot || !have_trans) {
    throw IoError(path.string() + ": missing scale, rotation_wxyz, or translation");
  }
  if (metric_fields == 3) rec.metrics = metrics;
  try {
    validate(rec.transform);
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Index list files: one nonnegative integer per line.

inline void write_indices(const std::filesystem::path& path,
                          const std::vector<std::size_t>& indices) {
  std::string out;
  for (std::size_t i : indices) out += std::to_string(i) + '\n';
  detail::write_text_file(path, out);
}

inline std::vector<std::size_t> read_indices(const std::filesystem::path& path) {
  const std::string text = detail::read_text_file(path);
  std::vector<std::size_t> out;
  detail::for_each_data_line(text, [&](std::size_t line_no, const auto& tokens) {
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    if (tokens.size() != 1) throw IoError(ctx + ": expected one index per line");
    unsigned long long v = 0;
    const auto tok = tokens[0];
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw IoError(ctx + ": cannot parse index '" + std::string(tok) + "'");
    }
    out.push_back(v);
  });
  return out;
}

}  // namespace gsreg
