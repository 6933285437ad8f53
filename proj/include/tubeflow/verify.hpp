#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tubeflow/tube.hpp"

namespace tubeflow {

// Numerical evidence that the transported cross-section family is the cheap
// one: distinct elements never collide, and swapping any two element targets
// raises the external work. These are sampled checks, not proofs.

struct ElementPair {
    Side side_a = Side::upper;
    double lambda_a = 0.0;
    Side side_b = Side::upper;
    double lambda_b = 0.0;
};

/// A pair is admissible when it names two genuinely distinct trajectories:
/// same side requires lambda_a != lambda_b; opposite sides require that not
/// both lambdas are zero (both zero is the shared center trajectory).
bool is_admissible_pair(const ElementPair& pair);

struct IntersectionReport {
    bool ok = true;
    std::size_t pairs_checked = 0;
    std::size_t pairs_skipped = 0; ///< inadmissible pairs in the input
    double min_separation = 0.0;   ///< smallest distance seen over all checks
    // First violation; meaningful only when !ok.
    double s = 0.0;
    ElementPair pair;
    double separation = 0.0;
};

/// Checks that every admissible pair keeps distance > min_separation at every
/// sampled s. Lambdas are initial coordinates in [0,1]; positions follow the
/// width-scaled transport family, so elements may cross the center line but
/// never each other. s samples must lie inside the tube domain.
IntersectionReport check_no_intersection(const VirtualTube& tube,
                                         const std::vector<double>& s_samples,
                                         const std::vector<ElementPair>& pairs,
                                         double min_separation = 1e-9);

/// Grid convenience: n_s uniform s samples over the tube domain, all pairs
/// drawn from n_lambda uniform lambda values per side (inadmissible pairs are
/// skipped, not generated).
IntersectionReport check_no_intersection_grid(const VirtualTube& tube,
                                              int n_s = 101, int n_lambda = 21,
                                              double min_separation = 1e-9);

/// Strict cube comparison for a trapezoid: elements move a_from -> a_to and
/// b_from -> b_to; returns whether
///   |a_from b_to|^3 + |b_from a_to|^3 > |a_from a_to|^3 + |b_from b_to|^3,
/// i.e. whether the crossed (swapped-target) legs are cube-longer. Requires
/// (b_from - a_from) and (b_to - a_to) parallel, same-oriented and nonzero;
/// throws std::invalid_argument otherwise.
bool trapezoid_cube_inequality(Vec2 a_from, Vec2 b_from, Vec2 a_to, Vec2 b_to);

struct SwapEnergies {
    double direct = 0.0;  ///< J, targets kept: a->a', b->b'
    double swapped = 0.0; ///< J, targets exchanged: a->b', b->a'
};

/// Drag work for moving a two-element pair of total mass pair_mass across one
/// transport step of length step_norm at cross speed cross_speed:
///   E = resistance * pair_mass * cross_speed^2 / step_norm^2 * (|xi_a|^3 + |xi_b|^3)
/// evaluated for both target assignments. Same trapezoid preconditions as
/// trapezoid_cube_inequality; pair_mass, cross_speed, step_norm must be > 0,
/// resistance >= 0. The swapped assignment always costs strictly more.
SwapEnergies swap_energy_comparison(Vec2 a_from, Vec2 b_from, Vec2 a_to, Vec2 b_to,
                                    double resistance, double pair_mass,
                                    double cross_speed, double step_norm);

struct TrapezoidSample {
    Vec2 a_from, b_from, a_to, b_to;
};

/// Random trapezoid with parallel same-oriented nondegenerate bases, in a
/// random rigid pose. Always satisfies the preconditions above.
TrapezoidSample random_trapezoid(std::mt19937_64& rng);

/// Random valid tube: a C1 chain of 2-5 line and arc pieces with per-side
/// piecewise-linear radii capped safely below the curvature bound.
VirtualTube random_valid_tube(std::mt19937_64& rng);

struct ValidationOptions {
    int grid_s_samples = 101;
    int grid_lambda_samples = 21;
    int random_tubes = 200;
    int random_trapezoids = 100000;
    double min_separation = 1e-9;
    std::uint64_t seed = 946431;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail; ///< counts on success; seed and counterexample on failure
};

struct ValidationReport {
    bool all_passed = false;
    std::uint64_t seed = 0;
    std::vector<ValidationCheck> checks;
};

/// Full oracle suite: grid intersection check on each given tube, then on
/// randomized tubes, then the cube inequality and swap comparison on
/// randomized trapezoids. Tube i uses seed + 1 + i; trapezoids use seed.
ValidationReport run_validation(const std::vector<VirtualTube>& tubes,
                                const ValidationOptions& options = {});

} // namespace tubeflow
