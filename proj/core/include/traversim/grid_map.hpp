/*
 * grid_map.hpp
 *
 * Fixed-geometry layered 2D grid map with per-cell Gaussian estimates and
 * the scalar Kalman fusion rule used to register measurements.
 */

#ifndef TRAVERSIM_GRID_MAP_HPP
#define TRAVERSIM_GRID_MAP_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <optional>
#include <vector>

#include "traversim/types.hpp"

namespace traversim {

// ─── Layer name constants ───────────────────────────────────────────────────

namespace layer {

constexpr auto elevation = "elevation";            // [m]
constexpr auto slope = "slope";                    // [rad]
constexpr auto roughness = "roughness";            // [m]
constexpr auto semantic_score = "semantic_score";  // [0, 1]
constexpr auto collapsibility = "collapsibility";  // [0, 1]
constexpr auto traversability = "traversability";  // [0, 1]

}  // namespace layer

// ─── Geometry ───────────────────────────────────────────────────────────────

struct GridIndex {
  int col = 0;  // x axis
  int row = 0;  // y axis

  bool operator==(const GridIndex&) const = default;
  auto operator<=>(const GridIndex&) const = default;
};

/// Fixed grid geometry: `origin` is the world position of the lower-left
/// corner of cell (0, 0); cells are square with edge `resolution`.
struct MapGeometry {
  Vec2 origin{};
  double resolution = 0.05;
  int length_cells = 1;  // cell count along x
  int width_cells = 1;   // cell count along y

  bool contains(GridIndex i) const {
    return i.col >= 0 && i.col < length_cells && i.row >= 0 &&
           i.row < width_cells;
  }
  int cell_count() const { return length_cells * width_cells; }
  Vec2 extent() const {
    return {length_cells * resolution, width_cells * resolution};
  }

  bool operator==(const MapGeometry&) const = default;
};

/// Cell index of a world point, or nullopt when the point falls outside
/// [origin, origin + extent).
std::optional<GridIndex> try_world_to_index(const Vec2& p,
                                            const MapGeometry& geom);

/// Throwing variant of try_world_to_index (std::out_of_range).
GridIndex world_to_index(const Vec2& p, const MapGeometry& geom);

/// World position of the cell center. Throws std::out_of_range when the
/// index is not inside the map.
Vec2 index_to_world(GridIndex i, const MapGeometry& geom);

// ─── Per-cell estimate and fusion ───────────────────────────────────────────

/// Scalar Gaussian estimate of one quantity in one cell. Unknown cells are an
/// explicit tri-state: mean/variance are unread until `known` is set.
struct CellEstimate {
  double mean = 0.0;
  double variance = 0.0;
  bool known = false;

  static CellEstimate unknown() { return {}; }
  static CellEstimate of(double mean, double variance) {
    return {mean, variance, true};
  }
};

/// One-dimensional Kalman measurement update.
///
/// An unknown prior is initialized directly from the measurement; otherwise
///   mean     = (s_m * mean_prior + s_p * value) / (s_p + s_m)
///   variance = s_p * s_m / (s_p + s_m)
/// with s_p the prior variance and s_m the measurement variance. The fused
/// variance is strictly below the prior's.
///
/// Throws std::invalid_argument when meas_variance <= 0.
CellEstimate fuse_cell(const CellEstimate& prior, double meas_value,
                       double meas_variance);

// ─── Semantic class layer ───────────────────────────────────────────────────

enum class SemanticClass : std::uint8_t { plants = 0, water = 1, none = 2 };

constexpr std::array<SemanticClass, 3> kAllClasses = {
    SemanticClass::plants, SemanticClass::water, SemanticClass::none};

std::string_view to_string(SemanticClass c);
std::optional<SemanticClass> class_from_string(std::string_view s);

/// Per-cell class observation counters. The label is the class with the
/// highest count; ties resolve conservatively (water > plants > none).
struct ClassCell {
  std::array<std::uint32_t, 3> counts{};

  bool observed() const { return counts[0] + counts[1] + counts[2] > 0; }
  SemanticClass label() const;
};

// ─── Layers and the layered map ─────────────────────────────────────────────

/// Row-major grid of CellEstimate (row = y, col = x).
class Layer {
 public:
  Layer() = default;
  Layer(int cols, int rows) : cols_(cols), rows_(rows), cells_(cols * rows) {}

  CellEstimate& at(GridIndex i) { return cells_[i.row * cols_ + i.col]; }
  const CellEstimate& at(GridIndex i) const {
    return cells_[i.row * cols_ + i.col];
  }

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  int known_count() const;

 private:
  int cols_ = 0;
  int rows_ = 0;
  std::vector<CellEstimate> cells_;
};

/// Row-major grid of ClassCell.
class ClassLayer {
 public:
  ClassLayer() = default;
  ClassLayer(int cols, int rows) : cols_(cols), rows_(rows), cells_(cols * rows) {}

  ClassCell& at(GridIndex i) { return cells_[i.row * cols_ + i.col]; }
  const ClassCell& at(GridIndex i) const {
    return cells_[i.row * cols_ + i.col];
  }

 private:
  int cols_ = 0;
  int rows_ = 0;
  std::vector<ClassCell> cells_;
};

/// Named scalar layers plus the categorical semantic layer, all sharing one
/// geometry. Layer means of bounded quantities (traversability,
/// collapsibility, semantic_score) are clamped to [0, 1] on ingestion.
class LayeredGridMap {
 public:
  LayeredGridMap() = default;
  explicit LayeredGridMap(const MapGeometry& geom);

  const MapGeometry& geometry() const { return geometry_; }

  Layer& layer(std::string_view id);
  const Layer& layer(std::string_view id) const;

  ClassLayer& semantic_class() { return class_layer_; }
  const ClassLayer& semantic_class() const { return class_layer_; }

  /// Kalman-fuse a measurement into a cell (bounded layers clamp the mean).
  void fuse(std::string_view id, GridIndex i, double value, double variance);

  /// Overwrite a cell estimate, bypassing fusion.
  void assign(std::string_view id, GridIndex i, double value, double variance);

  static const std::vector<std::string>& scalar_layer_ids();
  static bool is_bounded_layer(std::string_view id);

 private:
  MapGeometry geometry_{};
  std::map<std::string, Layer, std::less<>> layers_;
  ClassLayer class_layer_;
};

/// Robot-centric copy of all layers over the axis-aligned square window of
/// half-width span/2 around `center`, clipped to the global bounds. The
/// window geometry origin stays in the world frame, so window indices map
/// back to global ones by a constant offset (see window_offset).
///
/// Throws std::out_of_range when the window lies fully outside the map.
LayeredGridMap local_window(const LayeredGridMap& global, const Vec2& center,
                            double span);

/// Index offset of a window extracted from `global`: global index =
/// window index + offset.
GridIndex window_offset(const MapGeometry& global, const MapGeometry& window);

}  // namespace traversim

#endif  // TRAVERSIM_GRID_MAP_HPP
