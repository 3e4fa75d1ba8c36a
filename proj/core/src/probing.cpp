#include "traversim/probing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace traversim {

namespace {

bool questionable(const LayeredGridMap& map, GridIndex i) {
  const ClassCell& cls = map.semantic_class().at(i);
  if (!cls.observed()) return false;
  const SemanticClass label = cls.label();
  if (label != SemanticClass::plants && label != SemanticClass::water) {
    return false;
  }
  return !map.layer(layer::collapsibility).at(i).known;
}

}  // namespace

std::vector<Cluster> find_questionable_clusters(const LayeredGridMap& map) {
  const MapGeometry& g = map.geometry();
  const int cols = g.length_cells;
  const int rows = g.width_cells;
  std::vector<std::int8_t> seen(static_cast<std::size_t>(cols) * rows, 0);
  std::vector<Cluster> clusters;

  // Scan in (row, col) order so components come out ordered by their minimum
  // cell, as the seed of a flood fill is its component's minimum.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const GridIndex seed{c, r};
      if (seen[r * cols + c] || !questionable(map, seed)) continue;
      const SemanticClass label = map.semantic_class().at(seed).label();

      Cluster cl;
      cl.cls = label;
      std::vector<GridIndex> stack{seed};
      seen[r * cols + c] = 1;
      while (!stack.empty()) {
        const GridIndex u = stack.back();
        stack.pop_back();
        cl.cells.insert(u);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const GridIndex v{u.col + dc, u.row + dr};
            if (!g.contains(v)) continue;
            auto& mark = seen[v.row * cols + v.col];
            if (mark) continue;
            if (!questionable(map, v)) continue;
            if (map.semantic_class().at(v).label() != label) continue;
            mark = 1;
            stack.push_back(v);
          }
        }
      }
      clusters.push_back(std::move(cl));
    }
  }
  return clusters;
}

std::vector<ProbeSpot> candidate_spots(const Cluster& cl, int stride,
                                       const MapGeometry& geom) {
  if (stride < 1) throw std::invalid_argument("candidate_spots: stride < 1");
  if (cl.cells.empty()) return {};

  int min_col = geom.length_cells, min_row = geom.width_cells;
  for (const auto& i : cl.cells) {
    min_col = std::min(min_col, i.col);
    min_row = std::min(min_row, i.row);
  }

  std::vector<ProbeSpot> spots;
  for (const auto& i : cl.cells) {
    if ((i.col - min_col) % stride != 0) continue;
    if ((i.row - min_row) % stride != 0) continue;
    spots.push_back({index_to_world(i, geom), cl.id});
  }
  if (spots.empty()) {
    // Lattice missed the cluster entirely (thin diagonal shapes); fall back
    // to the member cell nearest the centroid.
    double cx = 0.0, cy = 0.0;
    for (const auto& i : cl.cells) {
      cx += i.col;
      cy += i.row;
    }
    cx /= static_cast<double>(cl.cells.size());
    cy /= static_cast<double>(cl.cells.size());
    const GridIndex* best = nullptr;
    double best_d2 = 0.0;
    for (const auto& i : cl.cells) {
      const double d2 = (i.col - cx) * (i.col - cx) + (i.row - cy) * (i.row - cy);
      if (!best || d2 < best_d2) {
        best = &i;
        best_d2 = d2;
      }
    }
    spots.push_back({index_to_world(*best, geom), cl.id});
  }
  return spots;
}

SpotDecision select_spot(std::span<const ProbeSpot> spots, const Vec2& robot,
                         double reach) {
  SpotDecision decision;
  if (spots.empty()) return decision;

  const ProbeSpot* best = nullptr;
  double best_d = 0.0;
  for (const auto& s : spots) {
    const double d = (s.world_point - robot).norm();
    const bool better =
        !best || d < best_d ||
        (d == best_d && (s.world_point.x < best->world_point.x ||
                         (s.world_point.x == best->world_point.x &&
                          s.world_point.y < best->world_point.y)));
    if (better) {
      best = &s;
      best_d = d;
    }
  }
  decision.spot = *best;
  decision.distance = best_d;
  decision.kind = best_d <= reach ? SpotDecisionKind::trigger
                                  : SpotDecisionKind::pending;
  return decision;
}

std::optional<ProbeEvent> run_probe_protocol(
    const Cluster& cluster, const ProbeSpot& spot, const WorldSpec& world,
    LayeredGridMap& global, const ProbeConfig& probe_cfg,
    const FusionConfig& fusion_cfg, std::int64_t tick, std::mt19937_64& rng) {
  ProbeMeasurement measurement;
  try {
    measurement = simulate_probe(world, spot.world_point, probe_cfg, rng);
  } catch (const std::out_of_range&) {
    return std::nullopt;  // probe failed; caller discards the spot
  }

  ProbeEvent event;
  event.tick = tick;
  event.measurement = measurement;
  event.collapsibility = estimate_collapsibility(measurement.f_ext, probe_cfg.f_hard);
  event.cluster_id = cluster.id;
  event.cells_updated = static_cast<int>(cluster.cells.size());

  propagate_to_cluster(event.collapsibility, cluster.cells, global,
                       fusion_cfg.sigma_c2);
  const double trav = clamp01(1.0 - event.collapsibility);
  for (const auto& i : cluster.cells) {
    global.assign(layer::traversability, i, trav, fusion_cfg.sigma_c2);
  }
  return event;
}

ProbingPlanner::Outcome ProbingPlanner::tick(
    std::int64_t tick, const Vec2& robot, const PlannedPath* path,
    const WorldSpec& world, LayeredGridMap& global,
    const ProbeConfig& probe_cfg, const FusionConfig& fusion_cfg,
    std::mt19937_64& rng) {
  Outcome out;
  if (!cfg_.enabled) return out;

  std::vector<Cluster> clusters = find_questionable_clusters(global);

  // A component touching an already probed one of the same class is that
  // component grown by new observations: it inherits the probed value
  // instead of being probed again.
  std::vector<Cluster> open;
  for (auto& cl : clusters) {
    ProbedRecord* heir = nullptr;
    for (auto& rec : probed_) {
      if (rec.cls != cl.cls) continue;
      for (const auto& cell : cl.cells) {
        for (int dr = -1; dr <= 1 && !heir; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (rec.cells.count({cell.col + dc, cell.row + dr})) {
              heir = &rec;
              break;
            }
          }
        }
        if (heir) break;
      }
      if (heir) break;
    }
    if (heir) {
      propagate_to_cluster(heir->c_value, cl.cells, global, fusion_cfg.sigma_c2);
      const double trav = clamp01(1.0 - heir->c_value);
      for (const auto& i : cl.cells) {
        global.assign(layer::traversability, i, trav, fusion_cfg.sigma_c2);
      }
      heir->cells.insert(cl.cells.begin(), cl.cells.end());
      out.inherited.push_back(
          {heir->id, heir->c_value, static_cast<int>(cl.cells.size())});
    } else {
      open.push_back(std::move(cl));
    }
  }

  // Stable ids across ticks: overlap with last tick's unprobed components.
  std::vector<Tracked> next_tracked;
  for (auto& cl : open) {
    int id = -1;
    for (const auto& tr : tracked_) {
      if (tr.cls != cl.cls) continue;
      bool overlap = false;
      for (const auto& cell : cl.cells) {
        if (tr.cells.count(cell)) {
          overlap = true;
          break;
        }
      }
      if (overlap && (id == -1 || tr.id < id)) id = tr.id;
    }
    if (id == -1) {
      id = next_cluster_id_++;
      out.new_clusters.push_back({id, cl.cls, static_cast<int>(cl.cells.size())});
    }
    cl.id = id;
    next_tracked.push_back({id, cl.cls, cl.cells});
  }
  tracked_ = std::move(next_tracked);

  if (active_) {
    // Standing at the spot; fire once the robot has stood long enough.
    if (tick - active_->pause_tick >= cfg_.pause_ticks_min) {
      const auto spot_cell = try_world_to_index(active_->spot.world_point,
                                                global.geometry());
      const Cluster* target = nullptr;
      for (const auto& cl : open) {
        if (spot_cell && cl.cells.count(*spot_cell)) {
          target = &cl;
          break;
        }
        if (cl.id == active_->cluster_id) target = &cl;
      }
      if (target) {
        auto event = run_probe_protocol(*target, active_->spot, world, global,
                                        probe_cfg, fusion_cfg, tick, rng);
        if (event) {
          probed_.push_back(
              {target->id, target->cls, target->cells, event->collapsibility});
          out.event = std::move(event);
        } else if (spot_cell) {
          rejected_spots_.insert(*spot_cell);
        }
      }
      active_.reset();
      out.resume_issued = true;
    }
    out.paused = active_.has_value();
    return out;
  }

  // Gather spots from clusters worth probing and trigger when one is in reach.
  std::vector<ProbeSpot> spots;
  for (const auto& cl : open) {
    if (cfg_.corridor_gating && path && !path->waypoints.empty()) {
      bool near_path = false;
      for (const auto& cell : cl.cells) {
        const Vec2 p = index_to_world(cell, global.geometry());
        for (const auto& w : path->waypoints) {
          if ((w - p).norm() <= cfg_.reach) {
            near_path = true;
            break;
          }
        }
        if (near_path) break;
      }
      if (!near_path) continue;
    }
    for (auto& s : candidate_spots(cl, cfg_.downsample_stride, global.geometry())) {
      const auto cell = try_world_to_index(s.world_point, global.geometry());
      if (cell && rejected_spots_.count(*cell)) continue;
      spots.push_back(s);
    }
  }

  const SpotDecision decision = select_spot(spots, robot, cfg_.reach);
  if (decision.kind == SpotDecisionKind::trigger) {
    active_ = ActiveProbe{decision.spot.cluster_id, decision.spot, tick};
    out.pause_issued = true;
    out.pause_spot = decision.spot;
    out.paused = true;
  }
  return out;
}

}  // namespace traversim
