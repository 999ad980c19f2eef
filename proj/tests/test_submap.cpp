#include "gsreg/submap.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "gsreg/rng.hpp"

using namespace gsreg;

namespace {

// A map whose first `n_hot` primitives carry the query embedding and the
// rest an orthogonal one.
GaussianMap two_class_map(const std::vector<Eigen::Vector3d>& means,
                          std::size_t n_hot) {
  GaussianMap map;
  map.embedding_dim = 2;
  for (std::size_t i = 0; i < means.size(); ++i) {
    GaussianPrimitive g;
    g.mean = means[i];
    g.embedding = Eigen::VectorXd::Zero(2);
    g.embedding[i < n_hot ? 0 : 1] = 1.0;
    map.primitives.push_back(g);
  }
  return map;
}

QuerySet axis_query() {
  Eigen::VectorXd q(2), n(2);
  q << 1, 0;
  n << 0, 1;
  return QuerySet{{q}, {n}};
}

}  // namespace

TEST_CASE("zero threshold selects everything") {
  std::vector<Eigen::Vector3d> means;
  for (int i = 0; i < 10; ++i) means.push_back({double(i), 0, 0});
  const auto map = two_class_map(means, 4);
  MatchConfig cfg;
  cfg.min_relevancy = 0.0;
  const auto idx = extract_submap(map, axis_query(), cfg);
  REQUIRE(idx.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(idx[i] == i);
}

TEST_CASE("threshold keeps only query-aligned primitives") {
  std::vector<Eigen::Vector3d> means;
  for (int i = 0; i < 10; ++i) means.push_back({double(i), 0, 0});
  const auto map = two_class_map(means, 4);
  MatchConfig cfg;
  cfg.min_relevancy = 0.6;  // aligned ~0.73, orthogonal 0.5
  const auto idx = extract_submap(map, axis_query(), cfg);
  CHECK(idx == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("disabled post-processing equals the pure threshold set") {
  Rng rng(21);
  GaussianMap map;
  map.embedding_dim = 4;
  for (int i = 0; i < 60; ++i) {
    GaussianPrimitive g;
    g.mean = rng.normal3() * 8.0;
    Eigen::VectorXd e =
        Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return rng.normal(); });
    g.embedding = e / e.norm();
    map.primitives.push_back(g);
  }
  QuerySet qs;
  Eigen::VectorXd q(4), n(4);
  q << 1, 0, 0, 0;
  n << 0, 1, 0, 0;
  qs.positive = {q};
  qs.negatives = {n};

  MatchConfig cfg;
  cfg.min_relevancy = 0.5;
  cfg.inflate_radius = 0.0;
  cfg.deflate_sigma = std::numeric_limits<double>::infinity();
  const auto idx = extract_submap(map, qs, cfg);

  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < map.primitives.size(); ++i) {
    if (relevancy(map.primitives[i].embedding, qs) >= 0.5) expected.push_back(i);
  }
  CHECK(idx == expected);
}

TEST_CASE("inflate pulls in nearby low-relevancy primitives") {
  // Primitive 0..3 aligned at x=0..3, primitive 4 orthogonal at (0, 0.5, 0),
  // primitive 5 orthogonal and far away.
  std::vector<Eigen::Vector3d> means = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0},
                                        {3, 0, 0}, {0, 0.5, 0}, {50, 0, 0}};
  const auto map = two_class_map(means, 4);
  MatchConfig cfg;
  cfg.min_relevancy = 0.6;
  cfg.inflate_radius = 1.0;
  const auto idx = extract_submap(map, axis_query(), cfg);
  CHECK(idx == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("deflate removes the isolated outlier") {
  // Tight chain with unit spacing plus one primitive 100 units out.
  std::vector<Eigen::Vector3d> means;
  for (int i = 0; i < 12; ++i) means.push_back({double(i), 0, 0});
  means.push_back({112.0, 0, 0});
  const auto map = two_class_map(means, means.size());

  MatchConfig cfg;
  cfg.min_relevancy = 0.0;
  cfg.deflate_sigma = 2.0;

  // Hand statistics: twelve nearest-neighbor distances of 1 and one of 100.
  // median = 1, mean = (12 + 100)/13, stddev follows; cutoff stays far
  // below 100, so exactly the outlier goes.
  const double mean = 112.0 / 13.0;
  double var = 0.0;
  for (int i = 0; i < 12; ++i) var += (1.0 - mean) * (1.0 - mean);
  var += (100.0 - mean) * (100.0 - mean);
  const double cutoff = 1.0 + 2.0 * std::sqrt(var / 13.0);
  REQUIRE(cutoff < 100.0);
  REQUIRE(cutoff > 1.0);

  const auto idx = extract_submap(map, axis_query(), cfg);
  REQUIRE(idx.size() == 12);
  CHECK(idx.back() == 11);
}

TEST_CASE("error paths: no semantics, empty result") {
  GaussianMap plain;
  plain.primitives.emplace_back();
  MatchConfig cfg;
  CHECK_THROWS_AS(extract_submap(plain, axis_query(), cfg), ConfigError);

  const auto map = two_class_map({{0, 0, 0}, {1, 0, 0}}, 0);  // all orthogonal
  cfg.min_relevancy = 0.9;
  CHECK_THROWS_AS(extract_submap(map, axis_query(), cfg), EmptySelectionError);
}
