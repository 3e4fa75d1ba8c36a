/*
 * collapsibility.hpp
 *
 * Collapsibility metric from probe forces, the simulated probe measurement
 * model, and cluster-wide propagation of a probe result.
 */

#ifndef TRAVERSIM_COLLAPSIBILITY_HPP
#define TRAVERSIM_COLLAPSIBILITY_HPP

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "traversim/grid_map.hpp"
#include "traversim/world.hpp"

namespace traversim {

struct ProbeConfig {
  double f_hard = 100.0;      // [N] reference force on hard ground
  double f_apply_max = 120.0;  // [N] most the probe can exert (> f_hard so
                               // hard ground can exceed the reference)
  int window_len = 25;         // sliding-window sample count
  double noise_std = 0.0;      // [N] force sensor noise
};

struct ProbeMeasurement {
  Vec2 spot{};
  double f_ext = 0.0;  // [N], window-averaged
  std::vector<double> samples;
};

struct ProbeEvent {
  std::int64_t tick = 0;
  ProbeMeasurement measurement{};
  double collapsibility = 0.0;  // [0, 1]
  int cluster_id = -1;
  int cells_updated = 0;
};

/// Normalized collapse risk: C = max(f_hard - f_ext, 0) / f_hard.
/// C = 1 means no supporting force at all (a covered hole); C = 0 means the
/// ground pushed back at least as hard as the reference.
/// Throws std::invalid_argument for f_hard <= 0 or f_ext < 0.
double estimate_collapsibility(double f_ext, double f_hard);

/// Push the probe at `spot` and read the force sensor: each raw sample is
/// the ground's bearing force saturated at f_apply_max plus Gaussian noise,
/// clamped at zero; f_ext averages window_len samples.
/// Throws std::out_of_range when the spot lies outside the world.
ProbeMeasurement simulate_probe(const WorldSpec& world, const Vec2& spot,
                                const ProbeConfig& cfg, std::mt19937_64& rng);

/// Broadcast one probe's collapsibility to every cell of its cluster by
/// direct assignment (each cluster is probed exactly once, so there is no
/// prior to fuse with). Throws std::invalid_argument on an empty cluster.
void propagate_to_cluster(double c_value, const std::set<GridIndex>& cluster_cells,
                          LayeredGridMap& map, double sigma_c2);

}  // namespace traversim

#endif  // TRAVERSIM_COLLAPSIBILITY_HPP
