#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "tubeflow/canonical.hpp"
#include "tubeflow/swarm.hpp"

using namespace tubeflow;

TEST_CASE("avoidance weight shape") {
    ControllerGains gains; // safety 0.3, support 0.6, cap 5
    CHECK(avoidance_weight(0.7, gains) == 0.0);
    CHECK(avoidance_weight(0.6, gains) == 0.0);
    CHECK(avoidance_weight(0.45, gains) == doctest::Approx(1.0).epsilon(1e-12));
    // Blows up toward the safety radius but saturates at the cap.
    CHECK(avoidance_weight(0.31, gains) == 5.0);
    CHECK(avoidance_weight(0.1, gains) == 5.0);
}

TEST_CASE("control law terms") {
    VirtualTube tube = canonical_tube('A');
    ControllerGains gains;
    Robot robot;
    robot.v_max = 1.3;

    // Free flight: feed-forward along the tangent, nothing else.
    robot.position = {10.0, 0.0};
    Vec2 v = control_step(robot, 10.0, {}, tube, gains);
    CHECK(v.x == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(std::abs(v.y) < 1e-12);

    // Near the upper wall the boundary term pushes inward; saturation keeps
    // the commanded direction.
    robot.position = {10.0, 1.7};
    Vec2 wall = control_step(robot, 10.0, {}, tube, gains);
    Vec2 unsaturated{1.3, -gains.k_keep * gains.weight_cap};
    CHECK(wall.norm() == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(wall.y < 0.0);
    CHECK(std::abs(wall.cross(unsaturated)) < 1e-9);

    // A close neighbor ahead dominates the feed-forward term.
    robot.position = {10.0, 0.0};
    std::vector<Vec2> neighbors{{10.4, 0.0}};
    Vec2 repelled = control_step(robot, 10.0, neighbors, tube, gains);
    CHECK(repelled.x == doctest::Approx(-1.3).epsilon(1e-12));
    CHECK(std::abs(repelled.y) < 1e-12);

    // Distant neighbors are ignored.
    std::vector<Vec2> far{{11.0, 0.0}};
    Vec2 free = control_step(robot, 10.0, far, tube, gains);
    CHECK(free.x == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("entry funnel splices onto the tube") {
    VirtualTube buffered = build_buffer_tube(canonical_tube('A'));
    CHECK(buffered.name() == "A+buffer");
    CHECK(buffered.s_begin() == doctest::Approx(-25.0).epsilon(1e-12));
    CHECK(buffered.s_end() == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(buffered.width(-25.0) == doctest::Approx(16.0).epsilon(1e-9));
    CHECK(buffered.width(0.0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(buffered.width(17.0) == doctest::Approx(4.0).epsilon(1e-9));
    // The taper narrows monotonically and lands flat at the junction.
    double prev = buffered.width(-25.0);
    for (int i = 1; i <= 100; ++i) {
        double w = buffered.width(-25.0 + 25.0 * i / 100.0);
        CHECK(w <= prev + 1e-9);
        prev = w;
    }
    // Near the junction the taper is interpolated between sampled knots, so
    // continuity holds to the knot-chord error, a few microns here.
    CHECK(std::abs(buffered.width(-0.001) - 4.0) < 1e-5);
    CHECK_NOTHROW(buffered.validate());

    VirtualTube curved = build_buffer_tube(canonical_tube('D'));
    CHECK(curved.curve().position(curved.s_begin()).x == doctest::Approx(-25.0).epsilon(1e-9));
    CHECK(std::abs(curved.curve().position(curved.s_begin()).y) < 1e-9);

    // The funnel splice expects the standard 4 m junction.
    auto curve = GeneratingCurve::straight({0.0, 0.0}, {40.0, 0.0});
    VirtualTube narrow(std::move(curve), RadiusProfile::constant(1.5, 0.0, 40.0),
                       RadiusProfile::constant(1.5, 0.0, 40.0));
    CHECK_THROWS_AS(build_buffer_tube(narrow), std::invalid_argument);
}

TEST_CASE("nearest-parameter lookup") {
    VirtualTube a = canonical_tube('A');
    TubeLocator locator(a.curve());
    CHECK(locator.nearest({10.3, 1.2}) == doctest::Approx(10.3).epsilon(1e-9));
    CHECK(locator.nearest({-5.0, 0.0}) == 0.0);
    CHECK(locator.nearest({50.0, 1.0}) == 40.0);
    CHECK(locator.nearest({10.3, 1.2}, 9.9) == doctest::Approx(10.3).epsilon(1e-9));

    VirtualTube d = canonical_tube('D');
    TubeLocator bent(d.curve());
    for (double s_ref : {3.3, 17.0, 23.7, 41.9}) {
        Vec2 p = d.curve().position(s_ref);
        CHECK(std::abs(bent.nearest(p) - s_ref) < 1e-3);
        CHECK(std::abs(bent.nearest(p, s_ref - 0.8) - s_ref) < 1e-3);
    }
}

TEST_CASE("scenario defaults") {
    SwarmScenario scenario = make_scenario(canonical_tube('A'));
    CHECK(scenario.tube.s_begin() == doctest::Approx(-25.0).epsilon(1e-12));
    CHECK(scenario.start_plane_s == 0.0);
    CHECK(scenario.n_robots == 50);
    CHECK(scenario.trials == 10);
    CHECK(scenario.dt == 0.05);
    CHECK(scenario.t_max == 300.0);
    CHECK(scenario.seed == 1);
    CHECK(scenario.entry_depth == 10.0);
    CHECK(scenario.entry_half_width == 7.5);
    CHECK(scenario.fast_depth == 5.0);
    CHECK(scenario.slow_min == 1.0);
    CHECK(scenario.fast_max == 2.0);
    CHECK(scenario.gains.k_line == 1.0);
    CHECK(scenario.gains.k_avoid == 4.0);
    CHECK(scenario.gains.k_keep == 4.0);
}

TEST_CASE("trials are deterministic and clean") {
    SwarmScenario scenario = make_scenario(canonical_tube('A'));
    scenario.n_robots = 6;
    scenario.t_max = 120.0;

    TrialResult first = run_trial(scenario, 42);
    TrialResult second = run_trial(scenario, 42);
    REQUIRE(first.crossing_times.size() == 6);
    REQUIRE(second.crossing_times.size() == 6);
    for (std::size_t i = 0; i < first.crossing_times.size(); ++i)
        CHECK(first.crossing_times[i] == second.crossing_times[i]);
    CHECK(first.min_pair_distance == second.min_pair_distance);
    CHECK(first.min_boundary_clearance == second.min_boundary_clearance);
    CHECK(first.robots.back().position.x == second.robots.back().position.x);

    CHECK(first.timed_out == 0);
    CHECK(first.containment_violations == 0);
    CHECK(first.safety_breaches == 0);
    CHECK(first.min_pair_distance > 0.3);
    for (double t : first.crossing_times) {
        CHECK(t > 15.0);
        CHECK(t < 80.0);
    }

    // A different seed gives a different draw.
    TrialResult other = run_trial(scenario, 43);
    CHECK(other.average_crossing_time != first.average_crossing_time);
}

TEST_CASE("mini campaign") {
    CampaignOptions options;
    options.n_robots = 4;
    options.trials = 2;
    options.seed = 3;
    options.quadrature = {200, 8};
    options.record_trajectories = true;

    CampaignResult result = run_campaign({canonical_tube('A')}, options);
    REQUIRE(result.tubes.size() == 1);
    const TubeSummary& summary = result.tubes[0];
    CHECK(summary.tube_name == "A");
    CHECK(summary.dof == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(summary.mean_crossing_time > 0.0);
    CHECK(summary.stdev_crossing_time >= 0.0);
    CHECK(summary.timed_out_total == 0);
    REQUIRE(summary.trials.size() == 2);
    CHECK(summary.trials[0].seed == 3);
    CHECK(summary.trials[1].seed == 4);
    REQUIRE(summary.trials[0].trajectories.size() == 4);
    for (const auto& path : summary.trials[0].trajectories)
        CHECK(path.size() >= 2);
    // One tube cannot be rank-correlated.
    CHECK_FALSE(result.spearman_dof_time.has_value());

    options.record_trajectories = false;
    options.keep_trials = false;
    CampaignResult trimmed = run_campaign({canonical_tube('A')}, options);
    CHECK(trimmed.tubes[0].trials.empty());
    CHECK(trimmed.tubes[0].mean_crossing_time ==
          doctest::Approx(summary.mean_crossing_time).epsilon(1e-12));
}

TEST_CASE("rank correlation") {
    CHECK(*spearman({1.0, 5.0, 9.0}, {2.0, 3.0, 100.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*spearman({1.0, 5.0, 9.0}, {7.0, 3.0, 1.0}) == doctest::Approx(-1.0).epsilon(1e-12));
    // Ties get average ranks: 3 / sqrt(10) here.
    CHECK(*spearman({1.0, 2.0, 2.0, 3.0}, {1.0, 2.0, 3.0, 4.0}) ==
          doctest::Approx(0.9486832980505138).epsilon(1e-12));

    CHECK_FALSE(spearman({}, {}).has_value());
    CHECK_FALSE(spearman({1.0}, {2.0}).has_value());
    CHECK_FALSE(spearman({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}).has_value());
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(spearman({1.0, 2.0, nan}, {1.0, 2.0, 3.0}).has_value());
    CHECK_THROWS_AS(spearman({1.0, 2.0}, {1.0}), std::invalid_argument);
}
