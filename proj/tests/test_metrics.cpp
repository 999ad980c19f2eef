#include "gsreg/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "gsreg/rng.hpp"
#include "gsreg/synth.hpp"
#include "gsreg/transform.hpp"

using namespace gsreg;

TEST_CASE("identical transforms give zero errors") {
  Rng rng(71);
  for (int i = 0; i < 20; ++i) {
    const auto t = random_similarity(rng);
    const auto m = metrics(t, t);
    CHECK(m.rotation_error_deg <= 1e-6);
    CHECK(m.translation_error == 0.0);
    CHECK(m.scale_error == 0.0);
  }
}

TEST_CASE("a quarter turn reads as 90 degrees") {
  Rng rng(72);
  const auto gt = random_similarity(rng);
  for (const auto& axis :
       {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()}) {
    SimilarityTransform est = gt;
    est.rotation = canonical(Eigen::Quaterniond(Eigen::AngleAxisd(M_PI / 2, axis)) *
                             gt.rotation);
    CHECK(metrics(est, gt).rotation_error_deg == Catch::Approx(90.0).margin(1e-9));
  }
}

TEST_CASE("trace formula agrees with the quaternion-dot formula") {
  Rng rng(73);
  for (int i = 0; i < 200; ++i) {
    const auto a = rng.rotation();
    const auto b = rng.rotation();
    const double via_trace = rotation_geodesic_deg(a, b);
    const double dot = std::abs(a.dot(b));
    const double via_quat = 2.0 * std::acos(std::min(1.0, dot)) * 180.0 / M_PI;
    CHECK(via_trace == Catch::Approx(via_quat).margin(1e-6));
  }
}

TEST_CASE("rotation error is symmetric") {
  Rng rng(74);
  for (int i = 0; i < 100; ++i) {
    const auto a = rng.rotation();
    const auto b = rng.rotation();
    CHECK(std::abs(rotation_geodesic_deg(a, b) - rotation_geodesic_deg(b, a)) <
          1e-9);
  }
}

TEST_CASE("rotation error never exceeds 180 degrees") {
  Rng rng(75);
  for (int i = 0; i < 200; ++i) {
    const double re = rotation_geodesic_deg(rng.rotation(), rng.rotation());
    CHECK(re >= 0.0);
    CHECK(re <= 180.0);
  }
}

TEST_CASE("RE and SE are invariant under a common left-composed transform") {
  Rng rng(76);
  for (int i = 0; i < 50; ++i) {
    const auto est = random_similarity(rng);
    const auto gt = random_similarity(rng);
    const auto g = random_similarity(rng);
    const auto m0 = metrics(est, gt);
    const auto m1 = metrics(compose(g, est), compose(g, gt));
    CHECK(std::abs(m0.rotation_error_deg - m1.rotation_error_deg) < 1e-7);
    CHECK(std::abs(m0.scale_error - m1.scale_error) < 1e-9);
  }
}

TEST_CASE("translation and scale errors are the documented formulas") {
  SimilarityTransform gt;
  gt.scale = 2.0;
  SimilarityTransform est;
  est.scale = 2.5;
  est.translation = {3.0, 0.0, 4.0};
  const auto m = metrics(est, gt);
  CHECK(m.translation_error == Catch::Approx(5.0));
  CHECK(m.scale_error == Catch::Approx(0.25));
}
