#include "traversim/semantic.hpp"

#include <cmath>
#include <stdexcept>

namespace traversim {

double class_score(SemanticClass c) {
  switch (c) {
    case SemanticClass::plants: return 0.8;  // semi-traversable
    case SemanticClass::water: return 0.3;   // semi-untraversable
    case SemanticClass::none: break;
  }
  throw std::invalid_argument("class_score: no score for class 'none'");
}

std::vector<SemanticObservation> sense_semantics(const WorldSpec& world,
                                                 const Pose2& pose,
                                                 const MapGeometry& geom,
                                                 const SemanticSensorSpec& spec,
                                                 std::mt19937_64& rng) {
  std::vector<SemanticObservation> obs;
  std::uniform_real_distribution<double> flip(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 1);

  for (int r = 0; r < geom.width_cells; ++r) {
    for (int c = 0; c < geom.length_cells; ++c) {
      const GridIndex i{c, r};
      const Vec2 p = index_to_world(i, geom);
      const Vec2 d = p - pose.position;
      const double dist = d.norm();
      if (dist > spec.max_range) continue;
      if (dist > 1e-9) {
        const double bearing = wrap_angle(std::atan2(d.y, d.x) - pose.heading);
        if (std::abs(bearing) > spec.fov_halfangle) continue;
      }

      SemanticClass truth = semantic_class_at(world, p);
      if (spec.misclass_prob > 0.0 && flip(rng) < spec.misclass_prob) {
        // Uniform over the two wrong classes.
        int k = pick(rng);
        for (SemanticClass wrong : kAllClasses) {
          if (wrong == truth) continue;
          if (k-- == 0) {
            truth = wrong;
            break;
          }
        }
      }
      obs.push_back({i, truth});
    }
  }
  return obs;
}

void fuse_semantic(LayeredGridMap& map, std::span<const SemanticObservation> obs,
                   double sigma_sem2) {
  if (!(sigma_sem2 > 0.0)) {
    throw std::invalid_argument("fuse_semantic: sigma_sem2 must be > 0");
  }
  for (const auto& o : obs) {
    if (o.observed_class != SemanticClass::none) {
      map.fuse(layer::semantic_score, o.cell, class_score(o.observed_class),
               sigma_sem2);
    }
    map.semantic_class().at(o.cell).counts[static_cast<int>(o.observed_class)]++;
  }
}

}  // namespace traversim
