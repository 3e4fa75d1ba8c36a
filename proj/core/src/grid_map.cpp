#include "traversim/grid_map.hpp"

#include <cmath>
#include <stdexcept>

namespace traversim {

std::optional<GridIndex> try_world_to_index(const Vec2& p,
                                            const MapGeometry& geom) {
  const int col = static_cast<int>(std::floor((p.x - geom.origin.x) / geom.resolution));
  const int row = static_cast<int>(std::floor((p.y - geom.origin.y) / geom.resolution));
  const GridIndex i{col, row};
  if (!geom.contains(i)) return std::nullopt;
  return i;
}

GridIndex world_to_index(const Vec2& p, const MapGeometry& geom) {
  if (auto i = try_world_to_index(p, geom)) return *i;
  throw std::out_of_range("world_to_index: point outside map bounds");
}

Vec2 index_to_world(GridIndex i, const MapGeometry& geom) {
  if (!geom.contains(i)) {
    throw std::out_of_range("index_to_world: index outside map bounds");
  }
  return {geom.origin.x + (i.col + 0.5) * geom.resolution,
          geom.origin.y + (i.row + 0.5) * geom.resolution};
}

CellEstimate fuse_cell(const CellEstimate& prior, double meas_value,
                       double meas_variance) {
  if (!(meas_variance > 0.0)) {
    throw std::invalid_argument("fuse_cell: measurement variance must be > 0");
  }
  if (!prior.known) return CellEstimate::of(meas_value, meas_variance);

  const double sp = prior.variance;
  const double sm = meas_variance;
  const double mean = (sm * prior.mean + sp * meas_value) / (sp + sm);
  const double variance = sp * sm / (sp + sm);
  return CellEstimate::of(mean, variance);
}

std::string_view to_string(SemanticClass c) {
  switch (c) {
    case SemanticClass::plants: return "plants";
    case SemanticClass::water: return "water";
    case SemanticClass::none: return "none";
  }
  return "none";
}

std::optional<SemanticClass> class_from_string(std::string_view s) {
  if (s == "plants") return SemanticClass::plants;
  if (s == "water") return SemanticClass::water;
  if (s == "none") return SemanticClass::none;
  return std::nullopt;
}

SemanticClass ClassCell::label() const {
  // Tie preference water > plants > none: the lower class score wins so a
  // contested cell is treated as the riskier terrain.
  SemanticClass best = SemanticClass::none;
  std::uint32_t best_count = counts[static_cast<int>(SemanticClass::none)];
  for (SemanticClass c : {SemanticClass::plants, SemanticClass::water}) {
    if (counts[static_cast<int>(c)] >= best_count &&
        counts[static_cast<int>(c)] > 0) {
      best = c;
      best_count = counts[static_cast<int>(c)];
    }
  }
  return best;
}

int Layer::known_count() const {
  int n = 0;
  for (const auto& c : cells_) n += c.known ? 1 : 0;
  return n;
}

namespace {

void validate_geometry(const MapGeometry& geom) {
  if (!(geom.resolution > 0.0)) {
    throw std::invalid_argument("MapGeometry: resolution must be > 0");
  }
  if (geom.length_cells < 1 || geom.width_cells < 1) {
    throw std::invalid_argument("MapGeometry: grid must be at least 1x1");
  }
}

}  // namespace

LayeredGridMap::LayeredGridMap(const MapGeometry& geom) : geometry_(geom) {
  validate_geometry(geom);
  for (const auto& id : scalar_layer_ids()) {
    layers_.emplace(id, Layer(geom.length_cells, geom.width_cells));
  }
  class_layer_ = ClassLayer(geom.length_cells, geom.width_cells);
}

const std::vector<std::string>& LayeredGridMap::scalar_layer_ids() {
  static const std::vector<std::string> ids = {
      layer::elevation,      layer::slope,          layer::roughness,
      layer::semantic_score, layer::collapsibility, layer::traversability};
  return ids;
}

bool LayeredGridMap::is_bounded_layer(std::string_view id) {
  return id == layer::traversability || id == layer::collapsibility ||
         id == layer::semantic_score;
}

Layer& LayeredGridMap::layer(std::string_view id) {
  auto it = layers_.find(id);
  if (it == layers_.end()) {
    throw std::invalid_argument("LayeredGridMap: no such layer '" +
                                std::string(id) + "'");
  }
  return it->second;
}

const Layer& LayeredGridMap::layer(std::string_view id) const {
  auto it = layers_.find(id);
  if (it == layers_.end()) {
    throw std::invalid_argument("LayeredGridMap: no such layer '" +
                                std::string(id) + "'");
  }
  return it->second;
}

void LayeredGridMap::fuse(std::string_view id, GridIndex i, double value,
                          double variance) {
  auto& cell = layer(id).at(i);
  cell = fuse_cell(cell, value, variance);
  // Eq-of-fusion means cannot leave the convex hull of its inputs; the clamp
  // only guards against out-of-range ingestion.
  if (is_bounded_layer(id)) cell.mean = clamp01(cell.mean);
}

void LayeredGridMap::assign(std::string_view id, GridIndex i, double value,
                            double variance) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("assign: variance must be > 0");
  }
  if (is_bounded_layer(id)) value = clamp01(value);
  layer(id).at(i) = CellEstimate::of(value, variance);
}

LayeredGridMap local_window(const LayeredGridMap& global, const Vec2& center,
                            double span) {
  if (!(span > 0.0)) throw std::invalid_argument("local_window: span must be > 0");
  const MapGeometry& g = global.geometry();
  const double half = span / 2.0;

  // Cell range covered by [center - half, center + half), clipped to bounds.
  int col0 = static_cast<int>(std::floor((center.x - half - g.origin.x) / g.resolution));
  int row0 = static_cast<int>(std::floor((center.y - half - g.origin.y) / g.resolution));
  int col1 = static_cast<int>(std::ceil((center.x + half - g.origin.x) / g.resolution));
  int row1 = static_cast<int>(std::ceil((center.y + half - g.origin.y) / g.resolution));
  col0 = std::max(col0, 0);
  row0 = std::max(row0, 0);
  col1 = std::min(col1, g.length_cells);
  row1 = std::min(row1, g.width_cells);
  if (col0 >= col1 || row0 >= row1) {
    throw std::out_of_range("local_window: window lies outside the map");
  }

  MapGeometry wg;
  wg.origin = {g.origin.x + col0 * g.resolution, g.origin.y + row0 * g.resolution};
  wg.resolution = g.resolution;
  wg.length_cells = col1 - col0;
  wg.width_cells = row1 - row0;

  LayeredGridMap window(wg);
  for (const auto& id : LayeredGridMap::scalar_layer_ids()) {
    const Layer& src = global.layer(id);
    Layer& dst = window.layer(id);
    for (int r = 0; r < wg.width_cells; ++r) {
      for (int c = 0; c < wg.length_cells; ++c) {
        dst.at({c, r}) = src.at({c + col0, r + row0});
      }
    }
  }
  for (int r = 0; r < wg.width_cells; ++r) {
    for (int c = 0; c < wg.length_cells; ++c) {
      window.semantic_class().at({c, r}) =
          global.semantic_class().at({c + col0, r + row0});
    }
  }
  return window;
}

GridIndex window_offset(const MapGeometry& global, const MapGeometry& window) {
  return {static_cast<int>(std::llround((window.origin.x - global.origin.x) /
                                        global.resolution)),
          static_cast<int>(std::llround((window.origin.y - global.origin.y) /
                                        global.resolution))};
}

}  // namespace traversim
