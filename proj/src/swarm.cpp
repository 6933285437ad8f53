#include "tubeflow/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace tubeflow {

namespace {

constexpr double kFunnelLength = 25.0;
constexpr double kFunnelEntryRadius = 8.0; ///< per side; 16 m entry width
constexpr int kTaperKnots = 501;
constexpr double kJunctionWidth = 4.0;

/// Uniform draw in [lo, hi) straight from the generator's bits, so results do
/// not depend on the standard library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

std::uint64_t cell_key(Vec2 p, double cell) {
    auto qx = static_cast<std::int64_t>(std::floor(p.x / cell));
    auto qy = static_cast<std::int64_t>(std::floor(p.y / cell));
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(qx)) << 32) |
           static_cast<std::uint32_t>(qy);
}

} // namespace

TubeLocator::TubeLocator(const GeneratingCurve& curve, double node_spacing)
    : curve_(&curve) {
    if (!(node_spacing > 0.0))
        throw std::invalid_argument("locator node spacing must be positive");
    double s0 = curve.s_begin();
    double s1 = curve.s_end();
    auto n = static_cast<std::size_t>(std::ceil((s1 - s0) / node_spacing)) + 1;
    n = std::max<std::size_t>(n, 3);
    s_.resize(n);
    pos_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s_[i] = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n - 1);
        pos_[i] = curve.position(s_[i]);
    }
    spacing_ = (s1 - s0) / static_cast<double>(n - 1);
}

double TubeLocator::refine(Vec2 p, std::size_t best) const {
    // Parabolic vertex of the squared distance through three nodes; exact on
    // straight pieces, error O(spacing^2) elsewhere.
    std::size_t b = std::clamp<std::size_t>(best, 1, s_.size() - 2);
    double d0 = (pos_[b - 1] - p).norm2();
    double d1 = (pos_[b] - p).norm2();
    double d2 = (pos_[b + 1] - p).norm2();
    double denom = d0 - 2.0 * d1 + d2;
    if (denom <= 0.0) return s_[best];
    double delta = std::clamp(0.5 * (d0 - d2) / denom, -2.0, 2.0);
    return std::clamp(s_[b] + delta * spacing_, s_.front(), s_.back());
}

double TubeLocator::nearest(Vec2 p) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        double d = (pos_[i] - p).norm2();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return refine(p, best);
}

double TubeLocator::nearest(Vec2 p, double warm_start, double window) const {
    double c = (warm_start - s_.front()) / spacing_;
    double span = window / spacing_;
    auto lo = static_cast<std::size_t>(std::clamp(std::floor(c - span), 0.0,
                                                  static_cast<double>(s_.size() - 1)));
    auto hi = static_cast<std::size_t>(std::clamp(std::ceil(c + span), 0.0,
                                                  static_cast<double>(s_.size() - 1)));
    std::size_t best = lo;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i <= hi; ++i) {
        double d = (pos_[i] - p).norm2();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    // A minimum pinned to the window edge means the warm start went stale.
    if ((best == lo && lo > 0) || (best == hi && hi + 1 < s_.size()))
        return nearest(p);
    return refine(p, best);
}

double avoidance_weight(double dist, const ControllerGains& gains) {
    if (dist >= gains.avoidance_radius) return 0.0;
    double denom = std::max(dist - gains.safety_radius, gains.weight_floor);
    return std::min((gains.avoidance_radius - dist) / denom, gains.weight_cap);
}

Vec2 control_step(const Robot& robot, double s_star, std::span<const Vec2> neighbors,
                  const VirtualTube& tube, const ControllerGains& gains) {
    Frame f = frame_at(tube.curve(), s_star);
    Vec2 v = gains.k_line * robot.v_max * f.tangent;

    for (Vec2 q : neighbors) {
        Vec2 away = robot.position - q;
        double d = away.norm();
        if (d <= 0.0 || d >= gains.avoidance_radius) continue;
        v = v + (gains.k_avoid * avoidance_weight(d, gains) / d) * away;
    }

    double offset = (robot.position - f.position).dot(f.normal);
    double clear_up = tube.radius(s_star, Side::upper) - offset;
    double clear_lo = tube.radius(s_star, Side::lower) + offset;
    double boundary = std::min(clear_up, clear_lo);
    if (boundary < gains.avoidance_radius) {
        Vec2 inward = clear_up < clear_lo ? -1.0 * f.normal : f.normal;
        v = v + gains.k_keep * avoidance_weight(std::max(boundary, 0.0), gains) * inward;
    }

    double speed = v.norm();
    if (speed > robot.v_max) v = (robot.v_max / speed) * v;
    return v;
}

VirtualTube build_buffer_tube(const VirtualTube& main_tube) {
    const GeneratingCurve& curve = main_tube.curve();
    double a = curve.s_begin();
    if (std::abs(main_tube.width(a) - kJunctionWidth) > 1e-6)
        throw std::invalid_argument("funnel needs a " + std::to_string(kJunctionWidth) +
                                    " m wide tube start, got " +
                                    std::to_string(main_tube.width(a)) + " m");

    Vec2 start = curve.position(a);
    Vec2 entry = start - kFunnelLength * curve.tangent(a);
    std::vector<CurvePiece> pieces;
    pieces.reserve(curve.pieces().size() + 1);
    pieces.push_back({LinePiece{entry, start}, kFunnelLength});
    pieces.insert(pieces.end(), curve.pieces().begin(), curve.pieces().end());
    GeneratingCurve combined{std::move(pieces), a - kFunnelLength};

    auto splice = [&](Side side) {
        double r_a = main_tube.radius(a, side);
        std::vector<double> ks, kr;
        ks.reserve(kTaperKnots + main_tube.profile(side).knots_s().size());
        kr.reserve(ks.capacity());
        for (int i = 0; i < kTaperKnots; ++i) {
            double u = static_cast<double>(i) / (kTaperKnots - 1);
            ks.push_back(a - kFunnelLength + u * kFunnelLength);
            // Half-cosine taper: zero slope at the entry and at the junction.
            kr.push_back(r_a + (kFunnelEntryRadius - r_a) * 0.5 *
                                   (1.0 + std::cos(std::numbers::pi * u)));
        }
        const auto& ms = main_tube.profile(side).knots_s();
        const auto& mr = main_tube.profile(side).knots_r();
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (ms[i] <= a + 1e-12) continue; // the junction knot is the taper's last
            ks.push_back(ms[i]);
            kr.push_back(mr[i]);
        }
        return RadiusProfile::piecewise_linear(std::move(ks), std::move(kr));
    };
    RadiusProfile upper = splice(Side::upper);
    RadiusProfile lower = splice(Side::lower);
    return {std::move(combined), std::move(upper), std::move(lower),
            main_tube.name() + "+buffer"};
}

SwarmScenario make_scenario(const VirtualTube& main_tube) {
    return SwarmScenario{.tube = build_buffer_tube(main_tube),
                         .start_plane_s = main_tube.s_begin()};
}

TrialResult run_trial(const SwarmScenario& scenario, std::uint64_t trial_seed) {
    if (scenario.n_robots < 1)
        throw std::invalid_argument("scenario needs at least one robot");
    if (!(scenario.dt > 0.0))
        throw std::invalid_argument("time step must be positive");

    const VirtualTube& tube = scenario.tube;
    const GeneratingCurve& curve = tube.curve();
    const ControllerGains& gains = scenario.gains;
    const double s_end = curve.s_end();
    const int n = scenario.n_robots;

    TubeLocator locator(curve);
    std::mt19937_64 rng(trial_seed);

    TrialResult out;
    out.seed = trial_seed;
    out.robots.resize(n);
    out.min_pair_distance = std::numeric_limits<double>::infinity();
    out.min_boundary_clearance = std::numeric_limits<double>::infinity();

    Vec2 entry_pos = curve.position(curve.s_begin());
    Vec2 entry_tan = curve.tangent(curve.s_begin());
    Vec2 entry_nrm = curve.normal(curve.s_begin());

    std::vector<double> s_star(n, 0.0);
    for (int i = 0; i < n; ++i) {
        Robot& r = out.robots[i];
        r.id = i;
        double depth = 0.0;
        for (;;) {
            depth = uniform(rng, 0.0, scenario.entry_depth);
            double across = uniform(rng, -scenario.entry_half_width, scenario.entry_half_width);
            Vec2 p = entry_pos + depth * entry_tan + across * entry_nrm;
            double s = locator.nearest(p);
            Frame f = frame_at(curve, s);
            double offset = (p - f.position).dot(f.normal);
            if (tube.radius(s, Side::upper) - offset < gains.safety_radius) continue;
            if (tube.radius(s, Side::lower) + offset < gains.safety_radius) continue;
            bool clear = true;
            for (int j = 0; j < i && clear; ++j)
                clear = distance(p, out.robots[j].position) > 2.0 * gains.safety_radius;
            if (!clear) continue;
            r.position = p;
            s_star[i] = s;
            break;
        }
        r.v_max = depth < scenario.fast_depth
                      ? uniform(rng, scenario.fast_min, scenario.fast_max)
                      : uniform(rng, scenario.slow_min, scenario.slow_max);
    }

    if (scenario.record_trajectories) {
        out.trajectories.resize(n);
        for (int i = 0; i < n; ++i) out.trajectories[i].push_back(out.robots[i].position);
    }

    auto active = [&](const Robot& r) { return !r.crossed_finish_at.has_value(); };

    auto record_metrics = [&]() {
        for (int i = 0; i < n; ++i) {
            const Robot& r = out.robots[i];
            if (!active(r)) continue;
            Frame f = frame_at(curve, s_star[i]);
            double offset = (r.position - f.position).dot(f.normal);
            double clear_up = tube.radius(s_star[i], Side::upper) - offset;
            double clear_lo = tube.radius(s_star[i], Side::lower) + offset;
            double boundary = std::min(clear_up, clear_lo);
            out.min_boundary_clearance = std::min(out.min_boundary_clearance, boundary);
            if (boundary < -1e-9) ++out.containment_violations;
        }
        for (int i = 0; i < n; ++i) {
            if (!active(out.robots[i])) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active(out.robots[j])) continue;
                double d = distance(out.robots[i].position, out.robots[j].position);
                out.min_pair_distance = std::min(out.min_pair_distance, d);
                if (d < gains.safety_radius) ++out.safety_breaches;
            }
        }
    };
    record_metrics();

    const double cell = gains.avoidance_radius;
    std::unordered_map<std::uint64_t, std::vector<int>> cells;
    std::vector<Vec2> velocity(n);
    std::vector<Vec2> candidates;

    int remaining = n;
    long step = 0;
    auto max_steps = static_cast<long>(std::ceil(scenario.t_max / scenario.dt));
    while (remaining > 0 && step < max_steps) {
        cells.clear();
        for (int i = 0; i < n; ++i)
            if (active(out.robots[i])) cells[cell_key(out.robots[i].position, cell)].push_back(i);

        for (int i = 0; i < n; ++i) {
            const Robot& r = out.robots[i];
            if (!active(r)) continue;
            candidates.clear();
            auto qx = static_cast<std::int64_t>(std::floor(r.position.x / cell));
            auto qy = static_cast<std::int64_t>(std::floor(r.position.y / cell));
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    Vec2 probe{(qx + dx + 0.5) * cell, (qy + dy + 0.5) * cell};
                    auto it = cells.find(cell_key(probe, cell));
                    if (it == cells.end()) continue;
                    for (int id : it->second)
                        if (id != i) candidates.push_back(out.robots[id].position);
                }
            }
            velocity[i] = control_step(r, s_star[i], candidates, tube, gains);
        }

        ++step;
        double now = scenario.dt * static_cast<double>(step);
        for (int i = 0; i < n; ++i) {
            Robot& r = out.robots[i];
            if (!active(r)) continue;
            r.position = r.position + scenario.dt * velocity[i];
            if (scenario.record_trajectories) out.trajectories[i].push_back(r.position);
            s_star[i] = locator.nearest(r.position, s_star[i]);
            if (!r.crossed_start_at && s_star[i] >= scenario.start_plane_s)
                r.crossed_start_at = now;
            if (r.crossed_start_at && s_star[i] >= s_end - 1e-9) {
                r.crossed_finish_at = now;
                --remaining;
            }
        }
        record_metrics();
    }

    for (const Robot& r : out.robots) {
        if (r.crossed_finish_at)
            out.crossing_times.push_back(*r.crossed_finish_at - *r.crossed_start_at);
        else
            ++out.timed_out;
    }
    if (out.crossing_times.empty()) {
        out.average_crossing_time = std::numeric_limits<double>::quiet_NaN();
    } else {
        double sum = std::accumulate(out.crossing_times.begin(), out.crossing_times.end(), 0.0);
        out.average_crossing_time = sum / static_cast<double>(out.crossing_times.size());
    }
    return out;
}

std::optional<double> spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("rank correlation needs equal-length inputs");
    std::size_t n = a.size();
    if (n < 2) return std::nullopt;
    for (double x : a)
        if (!std::isfinite(x)) return std::nullopt;
    for (double x : b)
        if (!std::isfinite(x)) return std::nullopt;

    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < idx.size()) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = 0.5 * static_cast<double>(i + j) + 1.0; // ties share the mean rank
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    std::vector<double> ra = ranks(a);
    std::vector<double> rb = ranks(b);
    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(n);
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(n);
    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = ra[i] - ma;
        double db = rb[i] - mb;
        num += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va <= 0.0 || vb <= 0.0) return std::nullopt;
    return num / std::sqrt(va * vb);
}

CampaignResult run_campaign(const std::vector<VirtualTube>& main_tubes,
                            const CampaignOptions& options) {
    CampaignResult result;
    std::vector<double> dofs, times;
    for (const VirtualTube& main : main_tubes) {
        TubeSummary summary;
        summary.tube_name = main.name();
        summary.dof = compute_dof(main, options.flow, options.quadrature).dof;

        SwarmScenario sc = make_scenario(main);
        sc.n_robots = options.n_robots;
        sc.trials = options.trials;
        sc.seed = options.seed;
        sc.dt = options.dt;
        sc.t_max = options.t_max;
        sc.gains = options.gains;
        sc.record_trajectories = options.record_trajectories;

        std::vector<double> averages;
        for (int k = 0; k < options.trials; ++k) {
            TrialResult trial = run_trial(sc, sc.seed + static_cast<std::uint64_t>(k));
            summary.timed_out_total += trial.timed_out;
            summary.containment_violations_total += trial.containment_violations;
            summary.safety_breaches_total += trial.safety_breaches;
            if (!std::isnan(trial.average_crossing_time))
                averages.push_back(trial.average_crossing_time);
            if (options.keep_trials) summary.trials.push_back(std::move(trial));
        }
        if (!averages.empty()) {
            double mean = std::accumulate(averages.begin(), averages.end(), 0.0) /
                          static_cast<double>(averages.size());
            summary.mean_crossing_time = mean;
            if (averages.size() > 1) {
                double acc = 0.0;
                for (double t : averages) acc += (t - mean) * (t - mean);
                summary.stdev_crossing_time =
                    std::sqrt(acc / static_cast<double>(averages.size() - 1));
            }
        } else {
            summary.mean_crossing_time = std::numeric_limits<double>::quiet_NaN();
        }
        dofs.push_back(summary.dof);
        times.push_back(summary.mean_crossing_time);
        result.tubes.push_back(std::move(summary));
    }
    result.spearman_dof_time = spearman(dofs, times);
    return result;
}

} // namespace tubeflow
