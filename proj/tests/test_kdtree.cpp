#include "gsreg/kdtree.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <vector>

#include "gsreg/rng.hpp"

using namespace gsreg;

namespace {

std::vector<std::size_t> brute_radius(const std::vector<Eigen::Vector3d>& pts,
                                      const Eigen::Vector3d& c, double r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if ((pts[i] - c).norm() <= r) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("radius search matches brute force") {
  Rng rng(7);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(rng.normal3() * 10.0);
  KdTree3 tree(pts);

  for (int q = 0; q < 100; ++q) {
    const Eigen::Vector3d c = rng.normal3() * 10.0;
    const double r = rng.uniform(0.5, 8.0);
    CHECK(tree.radius_search(c, r) == brute_radius(pts, c, r));
  }
}

TEST_CASE("infinite radius returns everything") {
  Rng rng(8);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(rng.normal3());
  KdTree3 tree(pts);
  const auto all =
      tree.radius_search({0, 0, 0}, std::numeric_limits<double>::infinity());
  REQUIRE(all.size() == pts.size());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
}

TEST_CASE("nearest neighbor matches brute force, with and without exclusion") {
  Rng rng(9);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(rng.normal3() * 5.0);
  KdTree3 tree(pts);

  for (int q = 0; q < 100; ++q) {
    const Eigen::Vector3d c = rng.normal3() * 5.0;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = (pts[i] - c).norm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    const auto [idx, dist] = tree.nearest(c);
    CHECK(idx == best);
    CHECK(dist == Catch::Approx(best_d).margin(1e-12));
  }

  // Excluding the point itself returns its true neighbor.
  for (std::size_t i = 0; i < 20; ++i) {
    std::size_t best = std::size_t(-1);
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const double d = (pts[j] - pts[i]).norm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    const auto [idx, dist] = tree.nearest(pts[i], i);
    CHECK(idx == best);
    CHECK(dist == Catch::Approx(best_d).margin(1e-12));
  }
}

TEST_CASE("duplicate points are all reported") {
  std::vector<Eigen::Vector3d> pts(5, Eigen::Vector3d(1, 2, 3));
  pts.push_back({10, 10, 10});
  KdTree3 tree(pts);
  const auto hits = tree.radius_search({1, 2, 3}, 0.1);
  CHECK(hits == std::vector<std::size_t>{0, 1, 2, 3, 4});
  const auto [idx, dist] = tree.nearest({1, 2, 3}, 0);
  CHECK(dist == 0.0);
  CHECK(idx == 1);
}
