#include "traversim/geometric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace traversim {

double ray_variance(double ray_length, const VarianceModel& vm) {
  if (ray_length < 0.0) {
    throw std::invalid_argument("ray_variance: negative ray length");
  }
  return vm.base_var + vm.range_coeff * ray_length * ray_length;
}

std::optional<PlaneFit> fit_plane_points(std::span<const Vec3> samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 3) return std::nullopt;

  // Center the samples so the normal equations stay well conditioned and the
  // offset term decouples.
  double mx = 0.0, my = 0.0, mz = 0.0;
  for (const auto& p : samples) {
    mx += p.x;
    my += p.y;
    mz += p.z;
  }
  mx /= n;
  my /= n;
  mz /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0, sxz = 0.0, syz = 0.0;
  for (const auto& p : samples) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    const double dz = p.z - mz;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
    sxz += dx * dz;
    syz += dy * dz;
  }

  // Collinear samples leave the 2x2 system singular.
  const double det = sxx * syy - sxy * sxy;
  const double scale = std::max(sxx, syy);
  if (det <= 1e-12 * scale * scale || scale <= 0.0) return std::nullopt;

  Eigen::Matrix2d a;
  a << sxx, sxy, sxy, syy;
  Eigen::Vector2d rhs(sxz, syz);
  const Eigen::Vector2d grad = a.ldlt().solve(rhs);

  const double gx = grad(0);
  const double gy = grad(1);
  const double inv_norm = 1.0 / std::sqrt(gx * gx + gy * gy + 1.0);

  PlaneFit fit;
  fit.unit_normal = {-gx * inv_norm, -gy * inv_norm, inv_norm};
  fit.sample_count = n;

  double ss = 0.0;
  for (const auto& p : samples) {
    const double r = (p.z - mz) - gx * (p.x - mx) - gy * (p.y - my);
    ss += r * r;
  }
  fit.residual_std = std::sqrt(ss / n);
  return fit;
}

std::optional<PlaneFit> fit_plane(const Layer& elevation,
                                  const MapGeometry& geom, GridIndex center,
                                  int halfwidth_cells) {
  std::vector<Vec3> samples;
  samples.reserve((2 * halfwidth_cells + 1) * (2 * halfwidth_cells + 1));
  for (int dr = -halfwidth_cells; dr <= halfwidth_cells; ++dr) {
    for (int dc = -halfwidth_cells; dc <= halfwidth_cells; ++dc) {
      const GridIndex i{center.col + dc, center.row + dr};
      if (!geom.contains(i)) continue;
      const CellEstimate& cell = elevation.at(i);
      if (!cell.known) continue;
      const Vec2 p = index_to_world(i, geom);
      samples.push_back({p.x, p.y, cell.mean});
    }
  }
  return fit_plane_points(samples);
}

double slope_at(const PlaneFit& fit) {
  return std::acos(std::clamp(fit.unit_normal.z, 0.0, 1.0));
}

double roughness_at(const PlaneFit& fit) { return fit.residual_std; }

std::size_t integrate_hits(std::span<const DepthHit> hits, Layer& elevation,
                           const MapGeometry& geom, const VarianceModel& vm) {
  std::size_t dropped = 0;
  for (const auto& hit : hits) {
    const auto idx = try_world_to_index({hit.world_point.x, hit.world_point.y}, geom);
    if (!idx) {
      ++dropped;
      continue;
    }
    CellEstimate& cell = elevation.at(*idx);
    cell = fuse_cell(cell, hit.world_point.z, ray_variance(hit.ray_length, vm));
  }
  return dropped;
}

void analyze_geometry(LayeredGridMap& map, int halfwidth_cells) {
  const MapGeometry& g = map.geometry();
  const Layer& elevation = map.layer(layer::elevation);
  Layer& slope = map.layer(layer::slope);
  Layer& roughness = map.layer(layer::roughness);

  for (int r = 0; r < g.width_cells; ++r) {
    for (int c = 0; c < g.length_cells; ++c) {
      const GridIndex i{c, r};
      const auto fit = fit_plane(elevation, g, i, halfwidth_cells);
      if (fit) {
        // Derived quantities, not fused measurements; the stamped variance is
        // a placeholder that keeps the known-cell invariant.
        slope.at(i) = CellEstimate::of(slope_at(*fit), 1.0);
        roughness.at(i) = CellEstimate::of(roughness_at(*fit), 1.0);
      } else {
        slope.at(i) = CellEstimate::unknown();
        roughness.at(i) = CellEstimate::unknown();
      }
    }
  }
}

}  // namespace traversim
