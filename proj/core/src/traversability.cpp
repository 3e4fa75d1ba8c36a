#include "traversim/traversability.hpp"

#include <cmath>
#include <stdexcept>

#include "traversim/semantic.hpp"

namespace traversim {

std::optional<double> local_traversability(const CellInputs& in,
                                           const FusionConfig& cfg,
                                           TravSource* source) {
  if (source) *source = TravSource::none;

  if (in.collapsibility) {
    if (source) *source = TravSource::collapsibility;
    return clamp01(1.0 - *in.collapsibility);
  }
  if (in.label != SemanticClass::none) {
    if (source) *source = TravSource::semantic;
    return class_score(in.label);
  }
  if (in.roughness && in.slope) {
    if (source) *source = TravSource::geometric;
    const double penalty = cfg.w_roughness * (*in.roughness / cfg.critical_roughness) +
                           cfg.w_slope * (*in.slope / cfg.critical_slope);
    return clamp01(1.0 - penalty);
  }
  return std::nullopt;
}

LocalTraversability compute_local_traversability(LayeredGridMap& window,
                                                 const FusionConfig& cfg) {
  const MapGeometry& g = window.geometry();
  LocalTraversability out;
  out.geometry = g;
  out.values = Layer(g.length_cells, g.width_cells);
  out.sources.assign(static_cast<std::size_t>(g.cell_count()), TravSource::none);

  const Layer& collapse = window.layer(layer::collapsibility);
  const Layer& rough = window.layer(layer::roughness);
  const Layer& slope = window.layer(layer::slope);
  Layer& trav = window.layer(layer::traversability);

  for (int r = 0; r < g.width_cells; ++r) {
    for (int c = 0; c < g.length_cells; ++c) {
      const GridIndex i{c, r};
      CellInputs in;
      if (const auto& cc = collapse.at(i); cc.known) in.collapsibility = cc.mean;
      const ClassCell& cls = window.semantic_class().at(i);
      if (cls.observed()) in.label = cls.label();
      if (const auto& rc = rough.at(i); rc.known) in.roughness = rc.mean;
      if (const auto& sc = slope.at(i); sc.known) in.slope = sc.mean;

      TravSource src = TravSource::none;
      const auto t = local_traversability(in, cfg, &src);
      out.sources[r * g.length_cells + c] = src;
      if (t) {
        const double variance =
            src == TravSource::collapsibility ? cfg.sigma_c2 : cfg.sigma_trav2;
        out.values.at(i) = CellEstimate::of(*t, variance);
        trav.at(i) = out.values.at(i);
      } else {
        out.values.at(i) = CellEstimate::unknown();
      }
    }
  }
  return out;
}

void register_global(const LocalTraversability& local, LayeredGridMap& global,
                     const FusionConfig& cfg) {
  const GridIndex off = window_offset(global.geometry(), local.geometry);
  for (int r = 0; r < local.geometry.width_cells; ++r) {
    for (int c = 0; c < local.geometry.length_cells; ++c) {
      const GridIndex wi{c, r};
      const CellEstimate& cell = local.values.at(wi);
      if (!cell.known) continue;
      const GridIndex gi{c + off.col, r + off.row};
      if (!global.geometry().contains(gi)) continue;
      if (local.source_at(wi) == TravSource::collapsibility) {
        global.assign(layer::traversability, gi, cell.mean, cfg.sigma_c2);
      } else {
        global.fuse(layer::traversability, gi, cell.mean, cfg.sigma_trav2);
      }
    }
  }
}

TraversabilityCategory classify(double t) {
  constexpr double kZeroTol = 1e-9;
  if (t < -kZeroTol || t > 1.0 + kZeroTol) {
    throw std::out_of_range("classify: score outside [0, 1]");
  }
  if (t <= kZeroTol) return TraversabilityCategory::untraversable;
  if (t <= 0.5) return TraversabilityCategory::semi_untraversable;
  if (t < 0.95) return TraversabilityCategory::semi_traversable;
  return TraversabilityCategory::traversable;
}

}  // namespace traversim
