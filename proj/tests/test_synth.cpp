#include "gsreg/synth.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "gsreg/metrics.hpp"

using namespace gsreg;

namespace {

bool maps_bitwise_equal(const GaussianMap& a, const GaussianMap& b) {
  if (a.size() != b.size() || a.embedding_dim != b.embedding_dim) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.primitives[i];
    const auto& y = b.primitives[i];
    if (x.mean != y.mean || x.scale != y.scale || x.opacity != y.opacity ||
        x.orientation.coeffs() != y.orientation.coeffs() ||
        x.color_dc != y.color_dc || x.embedding != y.embedding) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("single-primitive scene and spec validation") {
  SceneSpec spec;
  spec.n_gaussians = 1;
  spec.n_clusters = 1;
  CHECK(generate_scene(spec).size() == 1);

  spec.n_gaussians = 0;
  CHECK_THROWS_AS(generate_scene(spec), ConfigError);
  spec.n_gaussians = 2;
  spec.n_clusters = 3;
  CHECK_THROWS_AS(generate_scene(spec), ConfigError);
}

TEST_CASE("scene generation is deterministic per seed") {
  SceneSpec spec;
  spec.n_gaussians = 120;
  spec.n_clusters = 6;
  spec.seed = 77;
  const auto a = generate_scene(spec);
  const auto b = generate_scene(spec);
  CHECK(maps_bitwise_equal(a, b));

  spec.seed = 78;
  CHECK(!maps_bitwise_equal(a, generate_scene(spec)));
}

TEST_CASE("zero embedding noise yields exactly n_clusters distinct embeddings") {
  SceneSpec spec;
  spec.n_gaussians = 83;
  spec.n_clusters = 5;
  spec.cluster_embedding_noise = 0.0;
  spec.seed = 3;
  const auto map = generate_scene(spec);

  std::set<std::vector<double>> distinct;
  for (const auto& g : map.primitives) {
    distinct.insert(std::vector<double>(g.embedding.data(),
                                        g.embedding.data() + g.embedding.size()));
  }
  CHECK(distinct.size() == 5);

  // All scales within the documented log-uniform band.
  for (const auto& g : map.primitives) {
    CHECK(g.scale.minCoeff() >= 0.01 * spec.scene_diameter * 0.999);
    CHECK(g.scale.maxCoeff() <= 0.1 * spec.scene_diameter * 1.001);
  }
}

TEST_CASE("full overlap with identity transform reproduces the map") {
  SceneSpec spec;
  spec.n_gaussians = 40;
  spec.seed = 5;
  const auto map = generate_scene(spec);
  const auto split =
      split_and_transform(map, 1.0, identity_transform(), PerturbSpec{});
  CHECK(maps_bitwise_equal(split.source, split.target));
  CHECK(split.shared.size() == map.size());
}

TEST_CASE("ground-truth transform maps source onto target exactly (no noise)") {
  SceneSpec spec;
  spec.n_gaussians = 200;
  spec.n_clusters = 8;
  spec.seed = 11;
  const auto map = generate_scene(spec);

  Rng rng(12);
  const auto T_gt = random_similarity(rng, 0.5, 2.0, 20.0);
  PerturbSpec perturb;
  perturb.seed = 13;
  const auto split = split_and_transform(map, 0.4, T_gt, perturb);

  REQUIRE(!split.shared.empty());
  CHECK(split.source.size() < map.size());
  CHECK(split.target.size() < map.size());
  for (const auto& [s, t] : split.shared) {
    const auto& src = split.source.primitives[s];
    const auto& tgt = split.target.primitives[t];
    CHECK((apply_to_point(T_gt, src.mean) - tgt.mean).norm() < 1e-9);
    CHECK(src.embedding == tgt.embedding);
  }
}

TEST_CASE("drop fraction is seeded-exact and reduces the source count") {
  SceneSpec spec;
  spec.n_gaussians = 300;
  spec.seed = 21;
  const auto map = generate_scene(spec);
  PerturbSpec perturb;
  perturb.drop_fraction = 0.5;
  perturb.seed = 9;

  const auto a = split_and_transform(map, 1.0, identity_transform(), perturb);
  const auto b = split_and_transform(map, 1.0, identity_transform(), perturb);
  CHECK(a.source.size() == b.source.size());
  CHECK(a.source.size() > 100);
  CHECK(a.source.size() < 200);
  CHECK(a.shared.size() == a.source.size());
}

TEST_CASE("overlap band too small for the map errors out") {
  SceneSpec spec;
  spec.n_gaussians = 3;
  spec.n_clusters = 1;
  const auto map = generate_scene(spec);
  CHECK_THROWS_AS(
      split_and_transform(map, 0.1, identity_transform(), PerturbSpec{}),
      EmptySelectionError);
}

TEST_CASE("outlier injection rewires exactly the labeled pairs") {
  SceneSpec spec;
  spec.n_gaussians = 100;
  spec.seed = 31;
  const auto map = generate_scene(spec);
  const auto split =
      split_and_transform(map, 1.0, identity_transform(), PerturbSpec{});
  const auto corr = exact_correspondences(split);

  const auto injected = inject_outliers(corr, 0.3, split.target.size(), 55);
  CHECK(injected.outlier_pair_indices.size() == 30);

  std::set<std::size_t> labeled(injected.outlier_pair_indices.begin(),
                                injected.outlier_pair_indices.end());
  for (std::size_t k = 0; k < corr.pairs.size(); ++k) {
    if (labeled.count(k)) {
      CHECK(injected.corr.pairs[k].target_index != corr.pairs[k].target_index);
    } else {
      CHECK(injected.corr.pairs[k].target_index == corr.pairs[k].target_index);
    }
  }

  // Deterministic replay.
  const auto again = inject_outliers(corr, 0.3, split.target.size(), 55);
  CHECK(again.outlier_pair_indices == injected.outlier_pair_indices);
}

TEST_CASE("pose pairs are consistent with the generating transform") {
  Rng rng(61);
  const auto T = random_similarity(rng);
  auto pairs = make_pose_pairs(20, T, 5.0, rng);
  REQUIRE(pairs.size() == 20);
  for (const auto& [a, b] : pairs) {
    CHECK((apply_to_point(T, a.origin) - b.origin).norm() < 1e-12);
    CHECK(rotation_geodesic_deg(
              Eigen::Quaterniond(T.rotation * a.rotation), b.rotation) < 1e-9);
  }
}
