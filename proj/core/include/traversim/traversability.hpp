/*
 * traversability.hpp
 *
 * Hierarchical per-cell traversability: probe-derived collapsibility
 * overrides semantics, semantics override geometry. Local values register
 * into the global map through the scalar Kalman rule, except that
 * collapsibility-derived values overwrite.
 */

#ifndef TRAVERSIM_TRAVERSABILITY_HPP
#define TRAVERSIM_TRAVERSABILITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "traversim/grid_map.hpp"

namespace traversim {

struct FusionConfig {
  double w_roughness = 0.5;          // w1
  double w_slope = 0.5;              // w2, w1 + w2 = 1
  double critical_roughness = 0.05;  // c1 [m]
  double critical_slope = 0.5236;    // c2 [rad] (~30 deg)
  double t_unknown = 0.5;            // planning prior for unobserved cells
  double sigma_trav2 = 0.04;         // variance of geometric/semantic updates
  double sigma_sem2 = 0.09;          // semantic_score measurement variance
  double sigma_c2 = 0.0025;          // collapsibility layers (probe-backed,
                                     // more confident than semantics)
};

enum class TraversabilityCategory {
  traversable,
  semi_traversable,
  semi_untraversable,
  untraversable,
};

/// Which branch of the hierarchy produced a local value; registration treats
/// probe-backed values as overrides rather than measurements.
enum class TravSource : std::uint8_t { none, collapsibility, semantic, geometric };

struct CellInputs {
  std::optional<double> collapsibility;
  SemanticClass label = SemanticClass::none;  // none = no usable semantics
  std::optional<double> roughness;  // G1 [m]
  std::optional<double> slope;      // G2 [rad]
};

/// One cell of the hierarchy:
///   collapsibility known          -> 1 - C
///   else class label known        -> class score
///   else roughness & slope known  -> clamp01(1 - (w1*G1/c1 + w2*G2/c2))
///   else                          -> unknown
std::optional<double> local_traversability(const CellInputs& in,
                                           const FusionConfig& cfg,
                                           TravSource* source = nullptr);

/// Local traversability over a robot-centric window, with per-cell source
/// tags. Cell variances carry the registration variance for their branch.
struct LocalTraversability {
  MapGeometry geometry{};
  Layer values;
  std::vector<TravSource> sources;

  TravSource source_at(GridIndex i) const {
    return sources[i.row * geometry.length_cells + i.col];
  }
};

/// Evaluate the hierarchy for every cell of `window` (as produced by
/// local_window), writing the window's traversability layer as well.
LocalTraversability compute_local_traversability(LayeredGridMap& window,
                                                 const FusionConfig& cfg);

/// Register a local map into the global traversability layer: geometric and
/// semantic values fuse with sigma_trav2; collapsibility-derived values
/// overwrite the cell with variance sigma_c2.
void register_global(const LocalTraversability& local, LayeredGridMap& global,
                     const FusionConfig& cfg);

/// Reporting bands over the continuous score; the planner consumes the raw
/// score, not the category. Throws std::out_of_range outside [0, 1].
TraversabilityCategory classify(double t);

}  // namespace traversim

#endif  // TRAVERSIM_TRAVERSABILITY_HPP
