#include <cmath>
#include <vector>

#include "doctest.h"

#include "tubeflow/canonical.hpp"
#include "tubeflow/flowfield.hpp"
#include "tubeflow/tube.hpp"

using namespace tubeflow;

namespace {

VirtualTube straight_tube(std::vector<double> s, std::vector<double> upper,
                          std::vector<double> lower) {
    auto curve = GeneratingCurve::straight({0.0, 0.0}, {s.back(), 0.0});
    auto up = RadiusProfile::piecewise_linear(s, std::move(upper));
    auto lo = RadiusProfile::piecewise_linear(std::move(s), std::move(lower));
    return VirtualTube(std::move(curve), std::move(up), std::move(lo));
}

} // namespace

TEST_CASE("offset remap conserves per-side mass fraction") {
    // Upper side widens 2 -> 3 while the lower narrows 2 -> 1: the element that
    // started halfway up must end up at lambda = 1 - (1/2)(2*4)/(3*4) = 2/3.
    VirtualTube tube = straight_tube({0.0, 40.0}, {2.0, 3.0}, {2.0, 1.0});
    CHECK(remap_lambda(tube, 0.0, {Side::upper, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(remap_lambda(tube, 40.0, {Side::upper, 0.5}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    FlowState state = element_state(tube, FlowParams{}, 40.0, {Side::upper, 0.5});
    CHECK(state.lambda == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(state.position.y == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("remapped offsets may cross the center line") {
    // Upper side collapses 2 -> 0.5 while the width halves. The upper band
    // keeps half the section mass, so its conserved share needs thickness
    // (1 - lambda) * 0.5 / 2 = 1/2, i.e. lambda = -1: the element that started
    // on the curve ends up below it, at y = -1 * 0.5.
    VirtualTube tube = straight_tube({0.0, 40.0}, {2.0, 0.5}, {2.0, 1.5});
    FlowState state = element_state(tube, FlowParams{}, 40.0, {Side::upper, 0.0});
    CHECK(state.lambda == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(state.position.y == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("boundary elements stay on the boundary") {
    VirtualTube tube = canonical_tube('C');
    for (double s : {0.0, 7.0, 20.0, 33.0, 40.0}) {
        FlowState up = element_state(tube, FlowParams{}, s, {Side::upper, 1.0});
        Vec2 wall = tube.boundary_point(s, Side::upper);
        CHECK(distance(up.position, wall) < 1e-12);
        CHECK(up.lambda == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cross-section arrival time is arc length over speed") {
    VirtualTube a = canonical_tube('A');
    CHECK(time_of(a.curve(), 40.0, 2.0) == doctest::Approx(20.0).epsilon(1e-12));
    VirtualTube d = canonical_tube('D');
    CHECK(time_of(d.curve(), d.s_end(), 1.0) ==
          doctest::Approx(48.0 * std::asin(5.0 / 6.0)).epsilon(1e-9));
}

TEST_CASE("element velocity on a linear profile") {
    // Upper radius 2 + 0.05 s, lower constant 2: the lambda = 1/2 upper element
    // sits at y(s) = 1 + 0.0375 s, so its velocity is (1, 0.0375) at unit cross
    // speed. Central differences reproduce a linear path to roundoff.
    VirtualTube tube = straight_tube({0.0, 40.0}, {2.0, 4.0}, {2.0, 2.0});
    FlowState state = element_state(tube, FlowParams{}, 17.0, {Side::upper, 0.5});
    CHECK(state.position.y == doctest::Approx(1.0 + 0.0375 * 17.0).epsilon(1e-12));
    CHECK(state.velocity.x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(state.velocity.y == doctest::Approx(0.0375).epsilon(1e-9));
    CHECK(state.acceleration.norm() < 1e-6);

    // Velocity scales with the cross speed.
    FlowState fast = element_state(tube, FlowParams{3.0, 0.5, 1.0}, 17.0,
                                   {Side::upper, 0.5});
    CHECK(fast.velocity.y == doctest::Approx(3.0 * 0.0375).epsilon(1e-9));
}

TEST_CASE("element velocity agrees with an independent difference") {
    // The cross section advances at cross_speed in arc length, and tube E's
    // spline is parameterized by graph x, not arc length. Differencing element
    // positions against the arrival clock checks both the path derivative and
    // the parameter-to-time conversion.
    VirtualTube tube = canonical_tube('E');
    FlowParams params;
    ElementId id{Side::lower, 0.7};
    for (double s : {3.1, 11.0, 24.6, 37.2}) {
        FlowState state = element_state(tube, params, s, id);
        double h = 1e-6;
        Vec2 ahead = element_state(tube, params, s + h, id).position;
        Vec2 behind = element_state(tube, params, s - h, id).position;
        double dt = time_of(tube.curve(), s + h, params.cross_speed) -
                    time_of(tube.curve(), s - h, params.cross_speed);
        Vec2 fd = (ahead - behind) / dt;
        CHECK(distance(state.velocity, fd) < 1e-5);
    }
}

TEST_CASE("density carries the whole cross-section mass") {
    VirtualTube tube = canonical_tube('C');
    FlowParams params{1.0, 0.5, 1.0};
    for (double s : {0.0, 5.0, 20.0, 31.0, 40.0}) {
        FlowState state = element_state(tube, params, s, {Side::upper, 0.3});
        CHECK(state.density * tube.width(s) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Twice the mass, twice the density.
    FlowState heavy = element_state(tube, FlowParams{1.0, 0.5, 2.0}, 20.0,
                                    {Side::upper, 0.3});
    CHECK(heavy.density == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transport force combines inertia and quadratic drag") {
    FlowState state;
    state.velocity = {0.1, 0.0};
    FlowParams params{1.0, 0.5, 1.0};
    Vec2 f = element_force(state, params, 1.0);
    CHECK(f.x == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(f.y == 0.0);

    state.velocity = {0.1, 0.0};
    state.acceleration = {0.2, 0.3};
    Vec2 g = element_force(state, params, 0.1);
    CHECK(g.x == doctest::Approx(0.0205).epsilon(1e-12));
    CHECK(g.y == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("field sampling order and shape") {
    VirtualTube tube = canonical_tube('A');
    std::vector<double> s_grid{0.0, 20.0, 40.0};
    std::vector<double> lambda_grid{0.0, 1.0};
    auto samples = sample_flow_field(tube, FlowParams{}, s_grid, lambda_grid);
    REQUIRE(samples.size() == 12);
    // Upper side first; s is the outer loop, lambda the inner one.
    CHECK(samples[0].id.side == Side::upper);
    CHECK(samples[0].state.s == 0.0);
    CHECK(samples[0].id.lambda_init == 0.0);
    CHECK(samples[1].id.lambda_init == 1.0);
    CHECK(samples[2].state.s == 20.0);
    CHECK(samples[6].id.side == Side::lower);
    // Both sides share the lambda = 0 trajectory.
    CHECK(distance(samples[0].state.position, samples[6].state.position) < 1e-12);
    // Boundary samples land on opposite walls.
    CHECK(samples[1].state.position.y == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(samples[7].state.position.y == doctest::Approx(-2.0).epsilon(1e-12));
}
