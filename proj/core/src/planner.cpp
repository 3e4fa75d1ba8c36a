#include "traversim/planner.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace traversim {

std::optional<double> cell_cost(std::optional<double> traversability,
                                double step, const PlannerConfig& cfg,
                                double t_unknown) {
  const double t = traversability.value_or(t_unknown);
  if (t <= cfg.t_block) return std::nullopt;
  return step * (1.0 + cfg.lambda * (1.0 - t));
}

namespace {

std::optional<double> cost_of_cell(const Layer& trav, GridIndex i,
                                   const PlannerConfig& cfg, double t_unknown,
                                   double step) {
  const CellEstimate& cell = trav.at(i);
  std::optional<double> t;
  if (cell.known) t = cell.mean;
  return cell_cost(t, step, cfg, t_unknown);
}

}  // namespace

PlanResult plan(const Layer& traversability, const MapGeometry& geom,
                GridIndex start, GridIndex goal, const PlannerConfig& cfg,
                double t_unknown) {
  PlanResult result;
  if (!geom.contains(start) || !geom.contains(goal)) {
    result.status = PlanStatus::no_path;
    return result;
  }
  const double res = geom.resolution;
  if (!cost_of_cell(traversability, start, cfg, t_unknown, res)) {
    result.status = PlanStatus::blocked_start;
    return result;
  }
  if (!cost_of_cell(traversability, goal, cfg, t_unknown, res)) {
    result.status = PlanStatus::blocked_goal;
    return result;
  }

  const int cols = geom.length_cells;
  const int rows = geom.width_cells;
  const auto flat = [cols](GridIndex i) { return i.row * cols + i.col; };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(cols) * rows, kInf);
  std::vector<int> parent(dist.size(), -1);
  std::vector<bool> done(dist.size(), false);

  // (cost, row, col): ties expand in (row, col) order.
  using QEntry = std::tuple<double, int, int>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> queue;

  dist[flat(start)] = 0.0;
  queue.emplace(0.0, start.row, start.col);

  static constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const double diag = res * std::sqrt(2.0);

  while (!queue.empty()) {
    const auto [d, row, col] = queue.top();
    queue.pop();
    const GridIndex u{col, row};
    const int uf = flat(u);
    if (done[uf]) continue;
    done[uf] = true;
    if (u == goal) break;

    for (int k = 0; k < 8; ++k) {
      const GridIndex v{col + kDc[k], row + kDr[k]};
      if (!geom.contains(v)) continue;
      const int vf = flat(v);
      if (done[vf]) continue;
      const double step = k < 4 ? res : diag;
      const auto c = cost_of_cell(traversability, v, cfg, t_unknown, step);
      if (!c) continue;
      const double nd = d + *c;
      if (nd < dist[vf]) {
        dist[vf] = nd;
        parent[vf] = uf;
        queue.emplace(nd, v.row, v.col);
      }
    }
  }

  if (dist[flat(goal)] == kInf) {
    result.status = PlanStatus::no_path;
    return result;
  }

  std::vector<GridIndex> cells;
  for (int f = flat(goal); f != -1; f = parent[f]) {
    cells.push_back({f % cols, f / cols});
  }
  result.status = PlanStatus::found;
  result.path.total_cost = dist[flat(goal)];
  result.path.waypoints.reserve(cells.size());
  for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
    result.path.waypoints.push_back(index_to_world(*it, geom));
  }
  return result;
}

FollowOutcome follow(const PlannedPath& path, const Pose2& pose, double dt,
                     bool paused, const PlannerConfig& cfg) {
  FollowOutcome out{pose, false};
  if (paused) return out;
  if (path.waypoints.empty()) {
    out.reached_path_end = true;
    return out;
  }

  double budget = cfg.speed * dt;
  Vec2 pos = pose.position;
  double heading = pose.heading;
  std::size_t idx = 0;
  const std::size_t n = path.waypoints.size();

  auto within_tolerance = [&](const Vec2& w) {
    return (w - pos).norm() <= cfg.goal_tolerance;
  };
  while (idx < n && within_tolerance(path.waypoints[idx])) ++idx;

  while (budget > 1e-12 && idx < n) {
    const Vec2 d = path.waypoints[idx] - pos;
    const double len = d.norm();
    if (len > 1e-12) heading = std::atan2(d.y, d.x);
    if (len <= budget) {
      pos = path.waypoints[idx];
      budget -= len;
      ++idx;
      while (idx < n && within_tolerance(path.waypoints[idx])) ++idx;
    } else {
      pos = pos + d * (budget / len);
      budget = 0.0;
    }
  }

  out.pose = {pos, heading};
  out.reached_path_end =
      idx >= n && (path.waypoints.back() - pos).norm() <= cfg.goal_tolerance;
  return out;
}

}  // namespace traversim
