#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"

#include "tubeflow/canonical.hpp"
#include "tubeflow/dof.hpp"

using namespace tubeflow;

namespace {
// Coarse but exact-enough grids keep the unit suite fast; the default grids
// are exercised by the acceptance run.
const QuadratureSpec kCoarse{400, 16};
}

TEST_CASE("straight constant tube costs exactly the drag work") {
    // Every element moves in a straight line at the cross speed, so the work
    // per unit mass is mu * v^2 * L = 0.5 * 1 * 40 = 20 J.
    VirtualTube tube = canonical_tube('A');
    CHECK(element_energy(tube, FlowParams{}, {Side::upper, 0.25}, kCoarse) ==
          doctest::Approx(20.0).epsilon(1e-9));
    CHECK(element_energy(tube, FlowParams{}, {Side::lower, 0.9}, kCoarse) ==
          doctest::Approx(20.0).epsilon(1e-9));
    CHECK(total_energy(tube, FlowParams{}, kCoarse) ==
          doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("energy is linear in the transported mass") {
    VirtualTube tube = canonical_tube('C');
    double base = total_energy(tube, FlowParams{1.0, 0.5, 1.0}, kCoarse);
    double triple = total_energy(tube, FlowParams{1.0, 0.5, 3.0}, kCoarse);
    CHECK(triple == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("energy scales with the square of the cross speed") {
    // Holds exactly for any tube: velocities scale linearly with the cross
    // speed and both the inertia and drag terms are quadratic in it.
    VirtualTube tube = canonical_tube('D');
    double slow = total_energy(tube, FlowParams{1.0, 0.5, 1.0}, kCoarse);
    double fast = total_energy(tube, FlowParams{2.0, 0.5, 1.0}, kCoarse);
    CHECK(fast == doctest::Approx(4.0 * slow).epsilon(1e-9));
}

TEST_CASE("widening lowers boundary drag below the narrow throat") {
    double widened = total_energy(canonical_tube('B'), FlowParams{}, kCoarse);
    double constant = total_energy(canonical_tube('A'), FlowParams{}, kCoarse);
    double throat = total_energy(canonical_tube('C'), FlowParams{}, kCoarse);
    // All three share the drag floor of 20 J; geometry only adds on top.
    CHECK(widened > constant);
    CHECK(throat > constant);
}

TEST_CASE("grid doubling flags a profile spike it cannot resolve") {
    // An asymmetric notch 0.001 m wide hides between the nodes of the coarse
    // grid but not the doubled one, so the check must throw.
    auto curve = GeneratingCurve::straight({0.0, 0.0}, {40.0, 0.0});
    VirtualTube tube(std::move(curve),
                     RadiusProfile::piecewise_linear({0.0, 1.999, 2.0, 2.5, 40.0},
                                                     {2.0, 2.0, 0.2, 2.0, 2.0}),
                     RadiusProfile::constant(2.0, 0.0, 40.0));
    bool threw = false;
    try {
        total_energy_checked(tube, FlowParams{}, QuadratureSpec{10, 4});
    } catch (const ConvergenceError& e) {
        threw = true;
        CHECK(e.rel_change > 0.01);
        CHECK(e.coarse != e.fine);
    }
    CHECK(threw);

    // A smooth tube sails through and returns the plain quadrature value.
    VirtualTube a = canonical_tube('A');
    CHECK(total_energy_checked(a, FlowParams{}, kCoarse) ==
          total_energy(a, FlowParams{}, kCoarse));
}

TEST_CASE("dof report wiring") {
    VirtualTube tube = canonical_tube('C');
    DofReport report = compute_dof(tube, FlowParams{}, kCoarse);
    CHECK(report.tube_name == "C");
    CHECK(report.dof == report.average_width / report.energy);
    REQUIRE(report.per_element_energy.size() == 2 * std::size_t(kCoarse.n_lambda));

    // Element energies carry their bucket mass and add up to the total.
    std::vector<double> parts;
    for (const ElementEnergy& e : report.per_element_energy) {
        CHECK(e.energy > 0.0);
        parts.push_back(e.energy);
    }
    CHECK(std::abs(pairwise_sum(parts) - report.energy) < 1e-12);

    // Lambda buckets are midpoints, upper side listed first.
    CHECK(report.per_element_energy.front().side == Side::upper);
    CHECK(report.per_element_energy.front().lambda_center ==
          doctest::Approx(0.5 / kCoarse.n_lambda).epsilon(1e-12));
}

TEST_CASE("deterministic pairwise reduction") {
    CHECK(pairwise_sum({}) == 0.0);
    CHECK(pairwise_sum({3.25}) == 3.25);

    std::vector<double> ints(1000);
    std::iota(ints.begin(), ints.end(), 1.0);
    CHECK(pairwise_sum(ints) == 500500.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> noise(4097);
    for (double& v : noise) v = dist(rng);
    double plain = std::accumulate(noise.begin(), noise.end(), 0.0);
    CHECK(pairwise_sum(noise) == doctest::Approx(plain).epsilon(1e-12));
    // Same input, same bits.
    CHECK(pairwise_sum(noise) == pairwise_sum(noise));
}
