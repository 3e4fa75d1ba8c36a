/*
 * geometric.hpp
 *
 * Depth-hit integration into the elevation layer and per-cell geometric
 * terrain features: slope from the fitted-plane normal, roughness from the
 * residual deviation about that plane.
 */

#ifndef TRAVERSIM_GEOMETRIC_HPP
#define TRAVERSIM_GEOMETRIC_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "traversim/grid_map.hpp"
#include "traversim/types.hpp"

namespace traversim {

struct DepthHit {
  Vec3 world_point{};
  double ray_length = 0.0;  // [m]
};

/// Range-dependent measurement variance: variance = base_var + range_coeff * r^2.
/// Longer rays carry more uncertainty.
struct VarianceModel {
  double base_var = 1e-4;      // a [m^2]
  double range_coeff = 2.5e-4;  // b [m^2 / m^2]
};

double ray_variance(double ray_length, const VarianceModel& vm);

/// Least-squares plane over a set of samples, with the vertical residual
/// spread. The normal is oriented upward (n_z >= 0).
struct PlaneFit {
  Vec3 unit_normal{0.0, 0.0, 1.0};
  double residual_std = 0.0;  // [m], about the plane (not the raw mean)
  int sample_count = 0;
};

/// Fit z = a*x + b*y + c by least squares over the samples. Returns nullopt
/// for fewer than 3 samples or a collinear (rank-deficient) configuration.
std::optional<PlaneFit> fit_plane_points(std::span<const Vec3> samples);

/// Plane fit over the known elevation cells in the square neighborhood of
/// half-width `halfwidth_cells` around `center` (cell centers as x, y).
std::optional<PlaneFit> fit_plane(const Layer& elevation,
                                  const MapGeometry& geom, GridIndex center,
                                  int halfwidth_cells);

/// Angle of the fitted normal against vertical, in [0, pi/2].
double slope_at(const PlaneFit& fit);

/// Residual standard deviation about the fitted plane; a smooth ramp reads
/// as slope, not roughness.
double roughness_at(const PlaneFit& fit);

/// Fuse depth hits into the elevation layer (Kalman, range-dependent
/// variance); hits in one cell fuse sequentially in input order. Returns the
/// number of hits dropped for falling outside the map.
std::size_t integrate_hits(std::span<const DepthHit> hits, Layer& elevation,
                           const MapGeometry& geom, const VarianceModel& vm);

/// Recompute the slope and roughness layers of `map` from its elevation
/// layer. Cells whose neighborhood cannot support a plane fit are left
/// unknown.
void analyze_geometry(LayeredGridMap& map, int halfwidth_cells);

}  // namespace traversim

#endif  // TRAVERSIM_GEOMETRIC_HPP
