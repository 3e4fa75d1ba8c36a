#include "traversim/collapsibility.hpp"

#include <algorithm>
#include <stdexcept>

namespace traversim {

double estimate_collapsibility(double f_ext, double f_hard) {
  if (!(f_hard > 0.0)) {
    throw std::invalid_argument("estimate_collapsibility: f_hard must be > 0");
  }
  if (f_ext < 0.0) {
    throw std::invalid_argument("estimate_collapsibility: negative f_ext");
  }
  return std::max(f_hard - f_ext, 0.0) / f_hard;
}

ProbeMeasurement simulate_probe(const WorldSpec& world, const Vec2& spot,
                                const ProbeConfig& cfg, std::mt19937_64& rng) {
  const double bearing = bearing_force(world, spot);  // throws when outside
  const double pushed = std::min(bearing, cfg.f_apply_max);

  ProbeMeasurement m;
  m.spot = spot;
  m.samples.reserve(cfg.window_len);
  std::normal_distribution<double> noise(0.0, cfg.noise_std);
  double sum = 0.0;
  for (int i = 0; i < cfg.window_len; ++i) {
    double s = pushed;
    if (cfg.noise_std > 0.0) s += noise(rng);
    s = std::max(s, 0.0);
    m.samples.push_back(s);
    sum += s;
  }
  m.f_ext = sum / cfg.window_len;
  return m;
}

void propagate_to_cluster(double c_value, const std::set<GridIndex>& cluster_cells,
                          LayeredGridMap& map, double sigma_c2) {
  if (cluster_cells.empty()) {
    throw std::invalid_argument("propagate_to_cluster: empty cluster");
  }
  if (!(c_value >= 0.0 && c_value <= 1.0)) {
    throw std::invalid_argument("propagate_to_cluster: C outside [0, 1]");
  }
  for (const GridIndex& i : cluster_cells) {
    map.assign(layer::collapsibility, i, c_value, sigma_c2);
  }
}

}  // namespace traversim
