/*
 * probing.hpp
 *
 * Detection of questionable semantic clusters, probe-spot selection, and the
 * pause-probe-resume protocol. Each cluster is probed at most once; its
 * collapsibility is broadcast to every member cell.
 */

#ifndef TRAVERSIM_PROBING_HPP
#define TRAVERSIM_PROBING_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "traversim/collapsibility.hpp"
#include "traversim/grid_map.hpp"
#include "traversim/planner.hpp"
#include "traversim/traversability.hpp"
#include "traversim/world.hpp"

namespace traversim {

struct Cluster {
  int id = -1;
  SemanticClass cls = SemanticClass::none;
  std::set<GridIndex> cells;
  bool probed = false;
};

struct ProbeSpot {
  Vec2 world_point{};
  int cluster_id = -1;
};

struct ProbePlannerConfig {
  bool enabled = true;
  double reach = 0.7;         // [m] kinematic envelope of the probe
  int downsample_stride = 4;  // cells between candidate spots
  int pause_ticks_min = 3;    // ticks the robot stands before force sampling
  // Probe only clusters inside a corridor of width 2*reach around the
  // current path; off means probe everything visible.
  bool corridor_gating = true;
};

/// Connected components (8-connectivity, per class) of cells whose semantic
/// label is plants or water and whose collapsibility is still unknown.
/// Ordered by each component's minimum (row, col); ids are unassigned (-1).
std::vector<Cluster> find_questionable_clusters(const LayeredGridMap& map);

/// Sub-sample the cluster on a stride x stride lattice anchored at its
/// bounding-box minimum, mapped to cell centers. Falls back to the cell
/// nearest the cluster centroid so at least one spot is always returned.
std::vector<ProbeSpot> candidate_spots(const Cluster& cl, int stride,
                                       const MapGeometry& geom);

enum class SpotDecisionKind { trigger, pending, none };

struct SpotDecision {
  SpotDecisionKind kind = SpotDecisionKind::none;
  ProbeSpot spot{};        // valid unless kind == none
  double distance = 0.0;   // [m] robot to spot
};

/// Nearest spot by Euclidean distance (ties to the lexicographically smaller
/// world point); Trigger when it is within reach.
SpotDecision select_spot(std::span<const ProbeSpot> spots, const Vec2& robot,
                         double reach);

/// Probe `spot`, estimate collapsibility, broadcast it over the cluster and
/// override the cluster's global traversability with the probe-backed value.
/// Returns nullopt when the probe fails (out-of-bounds spot); the cluster is
/// left unprobed.
std::optional<ProbeEvent> run_probe_protocol(
    const Cluster& cluster, const ProbeSpot& spot, const WorldSpec& world,
    LayeredGridMap& global, const ProbeConfig& probe_cfg,
    const FusionConfig& fusion_cfg, std::int64_t tick, std::mt19937_64& rng);

/// Stateful per-tick orchestration: cluster tracking across ticks, probed
/// bookkeeping, corridor gating, and the pause protocol. Owned by the
/// simulation loop; single-threaded.
class ProbingPlanner {
 public:
  explicit ProbingPlanner(const ProbePlannerConfig& cfg) : cfg_(cfg) {}

  struct ClusterNote {
    int id = -1;
    SemanticClass cls = SemanticClass::none;
    int cells = 0;
  };
  struct InheritNote {
    int id = -1;
    double c_value = 0.0;
    int cells = 0;
  };
  struct Outcome {
    std::vector<ClusterNote> new_clusters;
    std::vector<InheritNote> inherited;
    bool pause_issued = false;
    bool resume_issued = false;
    bool paused = false;  // pause active at end of tick
    std::optional<ProbeSpot> pause_spot;
    std::optional<ProbeEvent> event;
  };

  /// One probing pass; `path` may be null when no plan exists.
  Outcome tick(std::int64_t tick, const Vec2& robot, const PlannedPath* path,
               const WorldSpec& world, LayeredGridMap& global,
               const ProbeConfig& probe_cfg, const FusionConfig& fusion_cfg,
               std::mt19937_64& rng);

  bool paused() const { return active_.has_value(); }
  const ProbePlannerConfig& config() const { return cfg_; }
  int probed_cluster_count() const { return static_cast<int>(probed_.size()); }

 private:
  struct ProbedRecord {
    int id = -1;
    SemanticClass cls = SemanticClass::none;
    std::set<GridIndex> cells;
    double c_value = 0.0;
  };
  struct Tracked {
    int id = -1;
    SemanticClass cls = SemanticClass::none;
    std::set<GridIndex> cells;
  };
  struct ActiveProbe {
    int cluster_id = -1;
    ProbeSpot spot{};
    std::int64_t pause_tick = 0;
  };

  ProbePlannerConfig cfg_;
  std::vector<ProbedRecord> probed_;
  std::vector<Tracked> tracked_;
  std::set<GridIndex> rejected_spots_;
  std::optional<ActiveProbe> active_;
  int next_cluster_id_ = 0;
};

}  // namespace traversim

#endif  // TRAVERSIM_PROBING_HPP
