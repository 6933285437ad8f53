#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tubeflow/dof.hpp"
#include "tubeflow/quadrature.hpp"
#include "tubeflow/tube.hpp"

namespace tubeflow {

// Multi-robot transit simulation. Robots enter through a wide straight funnel
// prepended to the tube, steer with a three-term law (follow the curve, avoid
// each other, keep off the walls) and are timed from the funnel exit to the
// tube end. Trials are deterministic functions of the scenario and seed.

struct ControllerGains {
    double k_line = 1.0;  ///< feed-forward along the curve tangent
    double k_avoid = 4.0; ///< inter-robot repulsion
    double k_keep = 4.0;  ///< boundary repulsion
    double safety_radius = 0.3;    ///< m; separations below this count as breaches
    double avoidance_radius = 0.6; ///< m; repulsion support radius
    double weight_cap = 5.0;       ///< repulsion weight saturation
    double weight_floor = 1e-3;    ///< m; keeps the weight finite at contact
};

struct Robot {
    int id = 0;
    Vec2 position{};
    double v_max = 1.0; ///< m/s
    std::optional<double> crossed_start_at;  ///< s; passed the timing start plane
    std::optional<double> crossed_finish_at; ///< s; passed the tube end
};

/// Polyline cache answering "which curve parameter is nearest to this point".
class TubeLocator {
public:
    explicit TubeLocator(const GeneratingCurve& curve, double node_spacing = 0.05);

    /// Full scan over the whole curve.
    double nearest(Vec2 p) const;
    /// Scan restricted to a parameter window around a previous answer; valid
    /// as long as the point moved less than `window` since then.
    double nearest(Vec2 p, double warm_start, double window = 2.0) const;

private:
    const GeneratingCurve* curve_;
    double spacing_;
    std::vector<double> s_;
    std::vector<Vec2> pos_;

    double refine(Vec2 p, std::size_t best) const;
};

/// Repulsion weight: 0 at dist >= avoidance_radius, grows as dist approaches
/// safety_radius, capped at weight_cap.
double avoidance_weight(double dist, const ControllerGains& gains);

/// Commanded velocity: k_line * v_max * tangent(s_star) plus repulsion from
/// each neighbor closer than avoidance_radius plus repulsion from the nearest
/// boundary, the sum clipped to v_max without changing direction. Neighbors
/// are other robot positions; entries farther than avoidance_radius are
/// ignored, so passing a superset is fine.
Vec2 control_step(const Robot& robot, double s_star, std::span<const Vec2> neighbors,
                  const VirtualTube& tube, const ControllerGains& gains);

/// Prepends a 25 m straight funnel to the tube, tapering each side from 8 m
/// at the entry to the tube's own start radius with a half-cosine profile
/// (zero slope at both ends, so entry width is 16 m and the junction is
/// smooth). Requires the tube's starting width to be 4 m; throws
/// std::invalid_argument otherwise. The result is named name() + "+buffer".
VirtualTube build_buffer_tube(const VirtualTube& main_tube);

struct SwarmScenario {
    VirtualTube tube;            ///< combined funnel + timed section
    double start_plane_s = 0.0;  ///< timing starts when s* crosses this
    int n_robots = 50;
    // Placement rectangle at the funnel entry: depth along the tube axis,
    // half-width across it. Positions are rejection-sampled to lie inside the
    // funnel with a safety_radius margin and pairwise farther than
    // 2 * safety_radius.
    double entry_depth = 10.0;
    double entry_half_width = 7.5;
    // Speed bands: robots placed within fast_depth of the entry (the rear of
    // the group) draw v_max from [fast_min, fast_max], the rest from
    // [slow_min, slow_max].
    double fast_depth = 5.0;
    double slow_min = 1.0, slow_max = 1.25;
    double fast_min = 1.75, fast_max = 2.0;
    double dt = 0.05;    ///< s
    double t_max = 300.0; ///< s; robots still in the tube then are timed out
    int trials = 10;
    std::uint64_t seed = 1;
    ControllerGains gains{};
    bool record_trajectories = false;
};

/// Scenario with all defaults for the given tube (funnel gets built here).
SwarmScenario make_scenario(const VirtualTube& main_tube);

struct TrialResult {
    std::uint64_t seed = 0;
    std::vector<Robot> robots;          ///< final states with crossing stamps
    std::vector<double> crossing_times; ///< t_i of finished robots, id order
    double average_crossing_time = 0.0; ///< mean of crossing_times; NaN if none
    int timed_out = 0;
    int containment_violations = 0; ///< robot-steps outside the boundary
    int safety_breaches = 0;        ///< pair-steps closer than safety_radius
    double min_pair_distance = 0.0;
    double min_boundary_clearance = 0.0;
    /// Per robot, position after every step (index 0 is the initial position);
    /// filled only when the scenario records trajectories.
    std::vector<std::vector<Vec2>> trajectories;
};

/// Runs one trial. Robots that cross the tube end are removed from the arena
/// (no interactions, no metrics) with their crossing time recorded.
TrialResult run_trial(const SwarmScenario& scenario, std::uint64_t trial_seed);

struct TubeSummary {
    std::string tube_name;
    double dof = 0.0;
    double mean_crossing_time = 0.0;  ///< mean over trials of per-trial averages
    double stdev_crossing_time = 0.0; ///< sample stddev over trials; 0 for 1 trial
    int timed_out_total = 0;
    int containment_violations_total = 0;
    int safety_breaches_total = 0;
    std::vector<TrialResult> trials;
};

struct CampaignOptions {
    int n_robots = 50;
    int trials = 10;
    std::uint64_t seed = 1;
    double dt = 0.05;
    double t_max = 300.0;
    ControllerGains gains{};
    FlowParams flow;           ///< transport parameters for the DOF column
    QuadratureSpec quadrature; ///< grids for the DOF column
    bool record_trajectories = false;
    bool keep_trials = true;   ///< retain per-trial details in the summaries
};

struct CampaignResult {
    std::vector<TubeSummary> tubes;
    /// Rank correlation between DOF and mean crossing time over the tubes;
    /// empty when fewer than two tubes or either column has no variation.
    std::optional<double> spearman_dof_time;
};

/// Runs `trials` trials per tube with seeds seed+0 ... seed+trials-1 (the same
/// sequence for every tube) and correlates DOF against mean crossing time.
/// DOF is computed on the given tubes as-is; the funnel is excluded.
CampaignResult run_campaign(const std::vector<VirtualTube>& main_tubes,
                            const CampaignOptions& options = {});

/// Spearman rank correlation with average ranks for ties; empty when fewer
/// than two points or either input has zero rank variance.
std::optional<double> spearman(const std::vector<double>& a,
                               const std::vector<double>& b);

} // namespace tubeflow
