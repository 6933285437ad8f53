#pragma once

#include <string>
#include <vector>

#include "tubeflow/flowfield.hpp"
#include "tubeflow/tube.hpp"

namespace tubeflow {

// Self-contained SVG renderings (no external assets, stable output bytes).

/// Tube outline: solid side boundaries, dashed generating curve, end cross
/// sections.
std::string render_tube_svg(const VirtualTube& tube);

/// Outline plus element velocity arrows on an n_s x n_lambda grid per side
/// (plus the generating curve itself). Arrow length is proportional to speed:
/// arrow_seconds meters per m/s.
std::string render_field_svg(const VirtualTube& tube, const FlowParams& params = {},
                             int n_s = 25, int n_lambda = 3,
                             double arrow_seconds = 1.2);

struct TrajectoryTrace {
    int robot_id = 0;
    double v_max = 1.0;
    std::vector<Vec2> points;
};

/// Outline plus one polyline per robot, colored from slow (blue) to fast (red)
/// by v_max.
std::string render_trajectories_svg(const VirtualTube& tube,
                                    const std::vector<TrajectoryTrace>& traces);

} // namespace tubeflow
