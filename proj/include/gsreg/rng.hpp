#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace gsreg {

/// SplitMix64 step; used both as a stream-derivation hash and to seed
/// generators. Replayability across runs is a hard contract everywhere, so
/// all random draws in the library go through this file rather than the
/// unspecified std:: distributions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Mixes a seed and any number of salts into one stream key. Parallel
/// consumers derive per-item streams as derive_stream(seed, {tag, index}) so
/// results do not depend on scheduling.
inline std::uint64_t derive_stream(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> salts) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  for (std::uint64_t salt : salts) {
    state ^= salt + 0x9e3779b97f4a7c15ull + (state << 6) + (state >> 2);
    key = splitmix64(state);
  }
  return key;
}

/// Small xoshiro256** generator with hand-rolled distributions. Every draw
/// is bit-reproducible for a given seed on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return draw % n;
  }

  /// Standard normal via the polar method (no cached spare, so consumption
  /// order is position-independent).
  double normal() {
    while (true) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double r2 = u * u + v * v;
      if (r2 > 0.0 && r2 < 1.0) {
        return u * std::sqrt(-2.0 * std::log(r2) / r2);
      }
    }
  }

  Eigen::Vector3d normal3() {
    const double x = normal();
    const double y = normal();
    const double z = normal();
    return {x, y, z};
  }

  Eigen::Vector3d unit_vector3() {
    while (true) {
      const Eigen::Vector3d v = normal3();
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

  /// Uniform direction and uniform radius-cubed point inside a ball.
  Eigen::Vector3d in_ball(double radius) {
    return unit_vector3() * (radius * std::cbrt(uniform01()));
  }

  /// Uniform random rotation (unnormalized Gaussian quaternion projected to
  /// the sphere), w >= 0.
  Eigen::Quaterniond rotation() {
    while (true) {
      Eigen::Quaterniond q(normal(), normal(), normal(), normal());
      const double n = q.norm();
      if (n < 1e-12) continue;
      q.coeffs() /= n;
      if (q.w() < 0.0) q.coeffs() = -q.coeffs();
      return q;
    }
  }

  /// Rotation by `angle_rad` about a uniformly random axis.
  Eigen::Quaterniond rotation_with_angle(double angle_rad) {
    return Eigen::Quaterniond(Eigen::AngleAxisd(angle_rad, unit_vector3()));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

inline Rng derived_rng(std::uint64_t seed,
                       std::initializer_list<std::uint64_t> salts) {
  return Rng(derive_stream(seed, salts));
}

}  // namespace gsreg
