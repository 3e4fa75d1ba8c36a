#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "traversim/semantic.hpp"

using namespace traversim;

namespace {

WorldSpec plant_world() {
  WorldSpec w;
  w.extent = {4.0, 4.0};
  w.semantic_regions.push_back({Rect{1.0, 1.0, 3.0, 3.0}, SemanticClass::plants});
  w.start_pose = {{0.5, 2.0}, 0.0};
  w.goal = {3.5, 2.0};
  return w;
}

MapGeometry geom_for(const WorldSpec& w, double res = 0.05) {
  MapGeometry g;
  g.resolution = res;
  g.length_cells = static_cast<int>(std::lround(w.extent.x / res));
  g.width_cells = static_cast<int>(std::lround(w.extent.y / res));
  return g;
}

}  // namespace

TEST_CASE("class scores") {
  CHECK(class_score(SemanticClass::plants) == 0.8);
  CHECK(class_score(SemanticClass::water) == 0.3);
  CHECK_THROWS_AS(class_score(SemanticClass::none), std::invalid_argument);
}

TEST_CASE("noiseless sensing reports ground truth inside the wedge") {
  const WorldSpec w = plant_world();
  const MapGeometry g = geom_for(w);
  SemanticSensorSpec spec;
  spec.fov_halfangle = 0.759;
  spec.max_range = 4.0;
  spec.misclass_prob = 0.0;
  std::mt19937_64 rng(1);

  const Pose2 pose{{0.5, 2.0}, 0.0};  // facing +x, region ahead
  const auto obs = sense_semantics(w, pose, g, spec, rng);
  CHECK(!obs.empty());
  int plant_cells = 0;
  for (const auto& o : obs) {
    const Vec2 p = index_to_world(o.cell, g);
    CHECK(o.observed_class == semantic_class_at(w, p));
    if (o.observed_class == SemanticClass::plants) ++plant_cells;
  }
  CHECK(plant_cells > 0);

  // Whole plant rectangle within range and wedge: every region cell observed.
  SemanticSensorSpec wide = spec;
  wide.max_range = 6.0;
  wide.fov_halfangle = 1.2;
  const auto all = sense_semantics(w, pose, g, wide, rng);
  int seen_region_cells = 0;
  for (const auto& o : all) {
    if (o.observed_class == SemanticClass::plants) ++seen_region_cells;
  }
  CHECK(seen_region_cells == 40 * 40);  // 2 m x 2 m at 0.05 m
}

TEST_CASE("region behind the robot is not observed") {
  const WorldSpec w = plant_world();
  const MapGeometry g = geom_for(w);
  SemanticSensorSpec spec;
  std::mt19937_64 rng(1);
  const Pose2 pose{{3.9, 2.0}, 0.0};  // region behind (facing +x at the east edge)
  const auto obs = sense_semantics(w, pose, g, spec, rng);
  for (const auto& o : obs) {
    CHECK(o.observed_class != SemanticClass::plants);
  }
}

TEST_CASE("misclassification rate is binomial") {
  WorldSpec w;
  w.extent = {4.0, 4.0};
  w.semantic_regions.push_back({Rect{0.0, 0.0, 4.0, 4.0}, SemanticClass::plants});
  const MapGeometry g = geom_for(w, 0.1);  // 40x40 = 1600 cells

  SemanticSensorSpec spec;
  spec.fov_halfangle = M_PI;  // all around
  spec.max_range = 10.0;
  spec.misclass_prob = 0.1;
  std::mt19937_64 rng(99);

  const Pose2 pose{{2.0, 2.0}, 0.0};
  const auto obs = sense_semantics(w, pose, g, spec, rng);
  REQUIRE(obs.size() == 1600);
  int wrong = 0;
  for (const auto& o : obs) {
    if (o.observed_class != SemanticClass::plants) ++wrong;
  }
  const double n = 1600.0, p = 0.1;
  const double sigma = std::sqrt(n * p * (1 - p));
  CHECK(std::abs(wrong - n * p) <= 3.0 * sigma);
}

TEST_CASE("fuse_semantic updates score and label") {
  const WorldSpec w = plant_world();
  const MapGeometry g = geom_for(w);
  LayeredGridMap map(g);
  const GridIndex cell{10, 10};
  const double sigma_sem2 = 0.09;

  SUBCASE("single plants observation initializes") {
    const std::vector<SemanticObservation> obs = {{cell, SemanticClass::plants}};
    fuse_semantic(map, obs, sigma_sem2);
    const auto& score = map.layer(layer::semantic_score).at(cell);
    CHECK(score.known);
    CHECK(score.mean == 0.8);
    CHECK(score.variance == sigma_sem2);
    CHECK(map.semantic_class().at(cell).label() == SemanticClass::plants);
  }

  SUBCASE("3 plants then 1 water keeps the plants label, drags the score") {
    std::vector<SemanticObservation> obs(3, {cell, SemanticClass::plants});
    obs.push_back({cell, SemanticClass::water});
    fuse_semantic(map, obs, sigma_sem2);
    CHECK(map.semantic_class().at(cell).label() == SemanticClass::plants);
    const double score = map.layer(layer::semantic_score).at(cell).mean;
    CHECK(score > 0.3);
    CHECK(score < 0.8);
  }

  SUBCASE("equal counts break toward water") {
    const std::vector<SemanticObservation> obs = {{cell, SemanticClass::plants},
                                                  {cell, SemanticClass::water}};
    fuse_semantic(map, obs, sigma_sem2);
    CHECK(map.semantic_class().at(cell).label() == SemanticClass::water);
  }

  SUBCASE("none observations vote on the label but not the score") {
    const std::vector<SemanticObservation> obs = {{cell, SemanticClass::none}};
    fuse_semantic(map, obs, sigma_sem2);
    CHECK_FALSE(map.layer(layer::semantic_score).at(cell).known);
    CHECK(map.semantic_class().at(cell).observed());
    CHECK(map.semantic_class().at(cell).label() == SemanticClass::none);
  }
}

TEST_CASE("semantic score stays inside the class-score hull") {
  const WorldSpec w = plant_world();
  const MapGeometry g = geom_for(w);
  LayeredGridMap map(g);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coin(0, 1);
  const GridIndex cell{5, 5};
  for (int k = 0; k < 500; ++k) {
    const SemanticClass c =
        coin(rng) ? SemanticClass::plants : SemanticClass::water;
    const std::vector<SemanticObservation> obs = {{cell, c}};
    fuse_semantic(map, obs, 0.09);
    const double mean = map.layer(layer::semantic_score).at(cell).mean;
    CHECK(mean >= 0.3 - 1e-12);
    CHECK(mean <= 0.8 + 1e-12);
  }
}

TEST_CASE("noisy labels converge to ground truth") {
  WorldSpec w;
  w.extent = {4.0, 4.0};
  w.semantic_regions.push_back({Rect{1.0, 1.0, 3.0, 3.0}, SemanticClass::plants});
  const MapGeometry g = geom_for(w);
  LayeredGridMap map(g);

  SemanticSensorSpec spec;
  spec.fov_halfangle = M_PI;
  spec.max_range = 6.0;
  spec.misclass_prob = 0.2;
  std::mt19937_64 rng(2024);
  const Pose2 pose{{2.0, 2.0}, 0.0};

  for (int pass = 0; pass < 50; ++pass) {
    const auto obs = sense_semantics(w, pose, g, spec, rng);
    fuse_semantic(map, obs, 0.09);
  }

  int region_cells = 0, correct = 0;
  for (int r = 0; r < g.width_cells; ++r) {
    for (int c = 0; c < g.length_cells; ++c) {
      const Vec2 p = index_to_world({c, r}, g);
      if (semantic_class_at(w, p) != SemanticClass::plants) continue;
      ++region_cells;
      if (map.semantic_class().at({c, r}).label() == SemanticClass::plants) {
        ++correct;
      }
    }
  }
  CHECK(region_cells == 1600);
  CHECK(correct >= region_cells * 99 / 100);
}
