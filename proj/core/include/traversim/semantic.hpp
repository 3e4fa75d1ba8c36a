/*
 * semantic.hpp
 *
 * Simulated semantic sensor (stand-in for an image segmenter) with the fixed
 * class-score table and probabilistic registration of class observations.
 */

#ifndef TRAVERSIM_SEMANTIC_HPP
#define TRAVERSIM_SEMANTIC_HPP

#include <random>
#include <span>
#include <vector>

#include "traversim/grid_map.hpp"
#include "traversim/world.hpp"

namespace traversim {

struct SemanticObservation {
  GridIndex cell{};
  SemanticClass observed_class = SemanticClass::none;
};

struct SemanticSensorSpec {
  double fov_halfangle = 0.759;  // [rad], forward wedge
  double max_range = 4.0;        // [m]
  double misclass_prob = 0.0;    // per-observation flip probability, < 0.5
  int rate_divisor = 1;          // sensor fires every k-th tick
};

/// Fixed traversability score of a class: plants 0.8, water 0.3. Throws
/// std::invalid_argument for `none` (background has no class score).
double class_score(SemanticClass c);

/// Observe the ground-truth class of every cell whose center lies in the
/// forward FOV wedge within max_range. Each observation is flipped to a
/// uniformly chosen wrong class with probability misclass_prob.
/// Deterministic given the seed; cells are visited in row-major order.
std::vector<SemanticObservation> sense_semantics(const WorldSpec& world,
                                                 const Pose2& pose,
                                                 const MapGeometry& geom,
                                                 const SemanticSensorSpec& spec,
                                                 std::mt19937_64& rng);

/// Register observations: class scores fuse into semantic_score with a
/// constant variance, observation counters update the categorical layer.
/// `none` observations only vote on the label.
void fuse_semantic(LayeredGridMap& map, std::span<const SemanticObservation> obs,
                   double sigma_sem2);

}  // namespace traversim

#endif  // TRAVERSIM_SEMANTIC_HPP
