#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "tubeflow/canonical.hpp"
#include "tubeflow/verify.hpp"

using namespace tubeflow;

TEST_CASE("unit square swap oracle") {
    // Elements rise one unit each; swapping the targets makes both legs sqrt(2).
    Vec2 a_from{0.0, 0.0}, b_from{1.0, 0.0}, a_to{0.0, 1.0}, b_to{1.0, 1.0};
    CHECK(trapezoid_cube_inequality(a_from, b_from, a_to, b_to));

    SwapEnergies e = swap_energy_comparison(a_from, b_from, a_to, b_to,
                                            0.5, 1.0, 1.0, 1.0);
    CHECK(e.direct == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.swapped == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("swap energies are pose invariant") {
    Vec2 a_from{0.0, 0.0}, b_from{1.0, 0.0}, a_to{0.3, 1.4}, b_to{1.9, 1.4};
    SwapEnergies base = swap_energy_comparison(a_from, b_from, a_to, b_to,
                                               0.5, 1.0, 1.0, 1.0);
    double c = std::cos(0.7), s = std::sin(0.7);
    auto place = [&](Vec2 p) {
        return Vec2{c * p.x - s * p.y + 3.0, s * p.x + c * p.y - 2.0};
    };
    SwapEnergies moved = swap_energy_comparison(place(a_from), place(b_from),
                                                place(a_to), place(b_to),
                                                0.5, 1.0, 1.0, 1.0);
    CHECK(moved.direct == doctest::Approx(base.direct).epsilon(1e-12));
    CHECK(moved.swapped == doctest::Approx(base.swapped).epsilon(1e-12));
}

TEST_CASE("trapezoid preconditions") {
    Vec2 a{0.0, 0.0}, b{1.0, 0.0};
    // Degenerate base.
    CHECK_THROWS_AS(trapezoid_cube_inequality(a, a, {0.0, 1.0}, {1.0, 1.0}),
                    std::invalid_argument);
    // Bases not parallel.
    CHECK_THROWS_AS(trapezoid_cube_inequality(a, b, {0.0, 1.0}, {1.0, 2.0}),
                    std::invalid_argument);
    // Parallel but oppositely oriented (crossed quadrilateral).
    bool threw = false;
    try {
        trapezoid_cube_inequality(a, b, {1.0, 1.0}, {0.0, 1.0});
    } catch (const std::invalid_argument& e) {
        threw = true;
        CHECK(std::string(e.what()).find("oriented") != std::string::npos);
    }
    CHECK(threw);

    // Parameter checks on the energy variant.
    CHECK_THROWS_AS(swap_energy_comparison(a, b, {0.0, 1.0}, {1.0, 1.0},
                                           0.5, 0.0, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(swap_energy_comparison(a, b, {0.0, 1.0}, {1.0, 1.0},
                                           0.5, 1.0, 1.0, 0.0),
                    std::invalid_argument);
    // Zero resistance is allowed and yields zero work either way.
    SwapEnergies none = swap_energy_comparison(a, b, {0.0, 1.0}, {1.0, 1.0},
                                               0.0, 1.0, 1.0, 1.0);
    CHECK(none.direct == 0.0);
    CHECK(none.swapped == 0.0);
}

TEST_CASE("randomized trapezoids always favor the direct assignment") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 2000; ++i) {
        TrapezoidSample t = random_trapezoid(rng);
        CHECK(trapezoid_cube_inequality(t.a_from, t.b_from, t.a_to, t.b_to));
        SwapEnergies e = swap_energy_comparison(t.a_from, t.b_from, t.a_to, t.b_to,
                                                0.5, 1.0, 1.0, 1.0);
        CHECK(e.swapped > e.direct);
    }

    // Same seed, same samples.
    std::mt19937_64 rng_a(42), rng_b(42);
    TrapezoidSample ta = random_trapezoid(rng_a);
    TrapezoidSample tb = random_trapezoid(rng_b);
    CHECK(ta.a_from.x == tb.a_from.x);
    CHECK(ta.b_to.y == tb.b_to.y);
}

TEST_CASE("pair admissibility") {
    CHECK(is_admissible_pair({Side::upper, 0.2, Side::upper, 0.8}));
    CHECK_FALSE(is_admissible_pair({Side::upper, 0.5, Side::upper, 0.5}));
    CHECK(is_admissible_pair({Side::upper, 0.0, Side::lower, 0.1}));
    // Both lambda zero names the one shared trajectory twice.
    CHECK_FALSE(is_admissible_pair({Side::upper, 0.0, Side::lower, 0.0}));
    // Equal lambdas on opposite sides are two distinct trajectories.
    CHECK(is_admissible_pair({Side::upper, 0.5, Side::lower, 0.5}));
}

TEST_CASE("separation tracking through the narrow throat") {
    VirtualTube tube = canonical_tube('C');
    std::vector<double> s_samples{0.0, 10.0, 20.0, 30.0, 40.0};

    // Same side: gap scales with the width ratio, 0.6 * 2 * (2/4) = 0.6 at the
    // throat.
    IntersectionReport same = check_no_intersection(
        tube, s_samples, {{Side::upper, 0.2, Side::upper, 0.8}});
    CHECK(same.ok);
    CHECK(same.pairs_checked == 1);
    CHECK(same.min_separation == doctest::Approx(0.6).epsilon(1e-9));

    // Opposite sides pinch to (2/4) * (0 + 0.1 * 2) = 0.1 but never touch.
    IntersectionReport cross = check_no_intersection(
        tube, s_samples, {{Side::upper, 0.0, Side::lower, 0.1}});
    CHECK(cross.ok);
    CHECK(cross.min_separation == doctest::Approx(0.1).epsilon(1e-9));

    // A threshold above the true minimum must report the violation site. The
    // gap shrinks 0.2 -> 0.15 -> 0.1 over the first three samples, so 0.12 is
    // first undercut at the throat.
    IntersectionReport tight = check_no_intersection(
        tube, s_samples, {{Side::upper, 0.0, Side::lower, 0.1}}, 0.12);
    CHECK_FALSE(tight.ok);
    CHECK(tight.s == 20.0);
    CHECK(tight.separation == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(tight.pair.side_b == Side::lower);
}

TEST_CASE("inadmissible pairs are skipped, not checked") {
    VirtualTube tube = canonical_tube('A');
    IntersectionReport report = check_no_intersection(
        tube, {0.0, 40.0}, {{Side::upper, 0.5, Side::upper, 0.5}});
    CHECK(report.ok);
    CHECK(report.pairs_checked == 0);
    CHECK(report.pairs_skipped == 1);
}

TEST_CASE("intersection check input validation") {
    VirtualTube tube = canonical_tube('A');
    CHECK_THROWS_AS(check_no_intersection(tube, {-1.0},
                                          {{Side::upper, 0.1, Side::upper, 0.9}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_no_intersection(tube, {0.0},
                                          {{Side::upper, -0.1, Side::upper, 0.9}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_no_intersection(tube, {0.0},
                                          {{Side::upper, 0.1, Side::upper, 1.2}}),
                    std::invalid_argument);
}

TEST_CASE("grid check enumerates all distinct pairs") {
    // 5 lambda values per side give 10 elements and C(10,2) = 45 pairs; the one
    // inadmissible pair (both centers) is never generated, so nothing is
    // counted as skipped.
    IntersectionReport report = check_no_intersection_grid(canonical_tube('A'), 11, 5);
    CHECK(report.ok);
    CHECK(report.pairs_checked == 44);
    CHECK(report.pairs_skipped == 0);
}

TEST_CASE("random tubes are valid and reproducible") {
    std::mt19937_64 rng_a(99), rng_b(99);
    VirtualTube ta = random_valid_tube(rng_a);
    VirtualTube tb = random_valid_tube(rng_b);
    CHECK_NOTHROW(ta.validate());
    CHECK(ta.s_end() == tb.s_end());
    CHECK(ta.width(ta.s_begin()) == tb.width(tb.s_begin()));
    CHECK(ta.curve().pieces().size() == tb.curve().pieces().size());
}

TEST_CASE("validation suite composition") {
    ValidationOptions options;
    options.grid_s_samples = 21;
    options.grid_lambda_samples = 7;
    options.random_tubes = 3;
    options.random_trapezoids = 500;
    ValidationReport report = run_validation({canonical_tube('A')}, options);
    CHECK(report.all_passed);
    CHECK(report.seed == options.seed);
    // geometry + grid for the input tube, random tubes, inequality, swap.
    REQUIRE(report.checks.size() == 5);
    CHECK(report.checks[0].name == "geometry: A");
    CHECK(report.checks[1].name == "no-intersection: A");
    for (const ValidationCheck& check : report.checks) CHECK(check.passed);
}
