#pragma once

#include <exception>
#include <string>
#include <utility>

namespace gsreg {

/// Base class for all failures raised by the library. Each subclass maps to
/// one stable CLI exit code (see tools/).
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }

  /// Prefixes the message with the pipeline stage that raised it.
  void set_stage(const std::string& stage) {
    message_ = "[" + stage + "] " + message_;
  }

 private:
  std::string message_;
};

/// Invalid configuration or misuse of an interface contract.
class ConfigError : public Error {
  using Error::Error;
};

/// File-level failure: missing file, malformed header, count mismatch,
/// non-finite payload values.
class IoError : public Error {
  using Error::Error;
};

/// A submap or correspondence query produced nothing to work with.
class EmptySelectionError : public Error {
  using Error::Error;
};

/// RANSAC terminated without a consensus of at least min_inliers.
class NoConsensusError : public Error {
 public:
  NoConsensusError(std::string message, std::size_t best_inlier_count)
      : Error(std::move(message)), best_inlier_count_(best_inlier_count) {}

  std::size_t best_inlier_count() const { return best_inlier_count_; }

 private:
  std::size_t best_inlier_count_;
};

/// Input geometry does not determine a solution (rank-deficient cross
/// covariance, collinear or coincident points, zero total weight).
class DegenerateGeometryError : public Error {
  using Error::Error;
};

/// The closed-form scale came out nonpositive; the problem has no valid
/// similarity solution.
class NonpositiveScaleError : public DegenerateGeometryError {
  using DegenerateGeometryError::DegenerateGeometryError;
};

}  // namespace gsreg
