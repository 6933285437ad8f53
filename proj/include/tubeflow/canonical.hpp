#pragma once

#include <string>
#include <vector>

#include "tubeflow/tube.hpp"

namespace tubeflow {

/// The five built-in benchmark tubes, named "A" through "E". All of them start
/// and finish with a 4 m cross section, endpoints 40 m apart:
///   A  straight, constant width 4
///   B  straight, per-side radius 2->3->2 run through the widening pass
///      (alpha = 1.3, beta = 0.05)
///   C  straight, per-side radius 2->1->2 (narrow throat)
///   D  S-bend of four radius-12 arcs, constant width 4
///   E  straight boundaries y = +-2 with a wave-shaped generating curve;
///      per-side radii follow from intersecting the normal with the boundary
std::vector<VirtualTube> canonical_tubes();

/// One tube from the set, by letter 'A'..'E' (case-insensitive).
VirtualTube canonical_tube(char name);

/// True if `name` is a single canonical letter.
bool is_canonical_name(const std::string& name);

} // namespace tubeflow
