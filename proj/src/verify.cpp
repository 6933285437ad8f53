#include "tubeflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "tubeflow/curve.hpp"

namespace tubeflow {

namespace {

constexpr double kParallelTol = 1e-9;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Signed distance of an element from the generating curve along the
// cross-section normal. All elements at a given s are colinear, so pair
// separation is just the offset difference.
struct OffsetBasis {
    double ru0, rl0, inv_l0;
};

double element_offset(const OffsetBasis& b, double ru, double rl, double l,
                      Side side, double lambda_init) {
    double scale = l * b.inv_l0;
    if (side == Side::upper) return ru - (1.0 - lambda_init) * b.ru0 * scale;
    return -rl + (1.0 - lambda_init) * b.rl0 * scale;
}

void require_trapezoid(Vec2 a_from, Vec2 b_from, Vec2 a_to, Vec2 b_to) {
    Vec2 u = b_from - a_from;
    Vec2 v = b_to - a_to;
    double nu = u.norm();
    double nv = v.norm();
    if (nu == 0.0 || nv == 0.0)
        throw std::invalid_argument("trapezoid base has zero length");
    if (std::abs(u.cross(v)) > kParallelTol * nu * nv)
        throw std::invalid_argument("trapezoid bases are not parallel");
    if (u.dot(v) <= 0.0)
        throw std::invalid_argument("trapezoid bases are oppositely oriented");
}

double cube(double x) { return x * x * x; }

} // namespace

bool is_admissible_pair(const ElementPair& pair) {
    if (pair.side_a == pair.side_b) return pair.lambda_a != pair.lambda_b;
    return pair.lambda_a + pair.lambda_b != 0.0;
}

IntersectionReport check_no_intersection(const VirtualTube& tube,
                                         const std::vector<double>& s_samples,
                                         const std::vector<ElementPair>& pairs,
                                         double min_separation) {
    const GeneratingCurve& curve = tube.curve();
    double s0 = curve.s_begin();
    double s1 = curve.s_end();
    for (double s : s_samples)
        if (s < s0 - 1e-9 || s > s1 + 1e-9)
            throw std::invalid_argument(fmt("sample s = %g outside tube domain [%g, %g]", s, s0, s1));
    for (const ElementPair& p : pairs)
        for (double lam : {p.lambda_a, p.lambda_b})
            if (!(lam >= 0.0 && lam <= 1.0))
                throw std::invalid_argument(fmt("element lambda %g outside [0, 1]", lam));

    IntersectionReport rep;
    std::vector<ElementPair> admissible;
    admissible.reserve(pairs.size());
    for (const ElementPair& p : pairs) {
        if (is_admissible_pair(p)) admissible.push_back(p);
        else ++rep.pairs_skipped;
    }
    rep.pairs_checked = admissible.size();
    rep.min_separation = std::numeric_limits<double>::infinity();

    OffsetBasis basis{tube.radius(s0, Side::upper), tube.radius(s0, Side::lower), 0.0};
    basis.inv_l0 = 1.0 / (basis.ru0 + basis.rl0);

    for (double s : s_samples) {
        double sc = std::clamp(s, s0, s1);
        double ru = tube.radius(sc, Side::upper);
        double rl = tube.radius(sc, Side::lower);
        double l = ru + rl;
        for (const ElementPair& p : admissible) {
            double oa = element_offset(basis, ru, rl, l, p.side_a, p.lambda_a);
            double ob = element_offset(basis, ru, rl, l, p.side_b, p.lambda_b);
            double sep = std::abs(oa - ob);
            rep.min_separation = std::min(rep.min_separation, sep);
            if (sep <= min_separation) {
                rep.ok = false;
                rep.s = sc;
                rep.pair = p;
                rep.separation = sep;
                return rep;
            }
        }
    }
    return rep;
}

IntersectionReport check_no_intersection_grid(const VirtualTube& tube,
                                              int n_s, int n_lambda,
                                              double min_separation) {
    if (n_s < 2 || n_lambda < 2)
        throw std::invalid_argument("intersection grid needs at least 2 samples per axis");
    double s0 = tube.curve().s_begin();
    double s1 = tube.curve().s_end();
    std::vector<double> s_samples(n_s);
    for (int i = 0; i < n_s; ++i)
        s_samples[i] = s0 + (s1 - s0) * i / (n_s - 1);

    std::vector<std::pair<Side, double>> elements;
    elements.reserve(2 * static_cast<std::size_t>(n_lambda));
    for (Side side : {Side::upper, Side::lower})
        for (int i = 0; i < n_lambda; ++i)
            elements.emplace_back(side, static_cast<double>(i) / (n_lambda - 1));

    std::vector<ElementPair> pairs;
    pairs.reserve(elements.size() * (elements.size() - 1) / 2);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (std::size_t j = i + 1; j < elements.size(); ++j) {
            ElementPair p{elements[i].first, elements[i].second,
                          elements[j].first, elements[j].second};
            if (is_admissible_pair(p)) pairs.push_back(p);
        }
    }
    return check_no_intersection(tube, s_samples, pairs, min_separation);
}

bool trapezoid_cube_inequality(Vec2 a_from, Vec2 b_from, Vec2 a_to, Vec2 b_to) {
    require_trapezoid(a_from, b_from, a_to, b_to);
    double crossed = cube(distance(a_from, b_to)) + cube(distance(b_from, a_to));
    double straight = cube(distance(a_from, a_to)) + cube(distance(b_from, b_to));
    return crossed > straight;
}

SwapEnergies swap_energy_comparison(Vec2 a_from, Vec2 b_from, Vec2 a_to, Vec2 b_to,
                                    double resistance, double pair_mass,
                                    double cross_speed, double step_norm) {
    require_trapezoid(a_from, b_from, a_to, b_to);
    if (!(pair_mass > 0.0) || !(cross_speed > 0.0) || !(step_norm > 0.0))
        throw std::invalid_argument("pair_mass, cross_speed and step_norm must be positive");
    if (resistance < 0.0)
        throw std::invalid_argument("resistance must be nonnegative");
    double scale = resistance * pair_mass * cross_speed * cross_speed / (step_norm * step_norm);
    SwapEnergies e;
    e.direct = scale * (cube(distance(a_from, a_to)) + cube(distance(b_from, b_to)));
    e.swapped = scale * (cube(distance(a_from, b_to)) + cube(distance(b_from, a_to)));
    return e;
}

TrapezoidSample random_trapezoid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

    // Axis-aligned first: both bases point along -y, so they share orientation
    // and stay exactly parallel under the common rotation.
    double top_a = uni(-5.0, 5.0);
    double len_a = uni(0.1, 8.0);
    double gap = uni(0.1, 10.0);
    double top_b = uni(-5.0, 5.0);
    double len_b = uni(0.1, 8.0);
    double angle = uni(0.0, 2.0 * std::numbers::pi);
    Vec2 shift{uni(-20.0, 20.0), uni(-20.0, 20.0)};

    double c = std::cos(angle), sn = std::sin(angle);
    auto place = [&](double x, double y) {
        return Vec2{shift.x + c * x - sn * y, shift.y + sn * x + c * y};
    };
    TrapezoidSample t;
    t.a_from = place(0.0, top_a);
    t.b_from = place(0.0, top_a - len_a);
    t.a_to = place(gap, top_b);
    t.b_to = place(gap, top_b - len_b);
    return t;
}

VirtualTube random_valid_tube(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

    Vec2 p{uni(-5.0, 5.0), uni(-5.0, 5.0)};
    double heading = uni(0.0, 2.0 * std::numbers::pi);
    int n_pieces = 2 + static_cast<int>(u01(rng) * 4.0);
    n_pieces = std::min(n_pieces, 5);

    std::vector<CurvePiece> pieces;
    double kappa_max = 0.0;
    for (int i = 0; i < n_pieces; ++i) {
        if (u01(rng) < 0.5) {
            double len = uni(3.0, 10.0);
            Vec2 q = p + len * Vec2{std::cos(heading), std::sin(heading)};
            pieces.push_back({LinePiece{p, q}, len});
            p = q;
        } else {
            double radius = uni(1.5, 12.0);
            double sweep = uni(0.25, 1.0) * (u01(rng) < 0.5 ? 1.0 : -1.0);
            double turn = sweep > 0.0 ? 1.0 : -1.0;
            Vec2 center = p + radius * turn * Vec2{-std::sin(heading), std::cos(heading)};
            double angle0 = std::atan2(p.y - center.y, p.x - center.x);
            double angle1 = angle0 + sweep;
            pieces.push_back({ArcPiece{center, radius, angle0, angle1},
                              radius * std::abs(sweep)});
            p = center + radius * Vec2{std::cos(angle1), std::sin(angle1)};
            heading += sweep;
            kappa_max = std::max(kappa_max, 1.0 / radius);
        }
    }
    GeneratingCurve curve{std::move(pieces)};

    // Radii stay a healthy margin below the curvature bound 1/kappa so every
    // generated tube passes validation.
    double r_cap = kappa_max > 0.0 ? std::min(2.5, 0.85 / kappa_max) : 2.5;
    auto make_profile = [&]() {
        int k = 2 + static_cast<int>(u01(rng) * 5.0);
        k = std::min(k, 6);
        std::vector<double> sk(k), rk(k);
        for (int i = 0; i < k; ++i) {
            sk[i] = curve.s_begin() + (curve.s_end() - curve.s_begin()) * i / (k - 1);
            rk[i] = uni(0.4 * r_cap, r_cap);
        }
        return RadiusProfile::piecewise_linear(sk, rk);
    };
    auto upper = make_profile();
    auto lower = make_profile();
    VirtualTube tube{curve, upper, lower, "random"};
    tube.validate();
    return tube;
}

ValidationReport run_validation(const std::vector<VirtualTube>& tubes,
                                const ValidationOptions& options) {
    ValidationReport rep;
    rep.seed = options.seed;

    auto describe_violation = [](const IntersectionReport& r) {
        return fmt("s = %.6f, %s lambda %.4f vs %s lambda %.4f, separation %.3e m",
                   r.s, side_name(r.pair.side_a), r.pair.lambda_a,
                   side_name(r.pair.side_b), r.pair.lambda_b, r.separation);
    };

    for (const VirtualTube& tube : tubes) {
        ValidationCheck geom{"geometry: " + tube.name(), false, ""};
        bool valid = true;
        try {
            tube.validate();
            geom.passed = true;
            geom.detail = "valid";
        } catch (const std::exception& e) {
            geom.detail = e.what();
            valid = false;
        }
        rep.checks.push_back(std::move(geom));
        if (!valid) continue;

        IntersectionReport ir = check_no_intersection_grid(
            tube, options.grid_s_samples, options.grid_lambda_samples,
            options.min_separation);
        ValidationCheck c{"no-intersection: " + tube.name(), ir.ok, ""};
        c.detail = ir.ok
            ? fmt("%zu pairs x %d samples, min separation %.3e m",
                  ir.pairs_checked, options.grid_s_samples, ir.min_separation)
            : describe_violation(ir);
        rep.checks.push_back(std::move(c));
    }

    if (options.random_tubes > 0) {
        ValidationCheck c{fmt("no-intersection: %d random tubes", options.random_tubes),
                          true, ""};
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < options.random_tubes && c.passed; ++i) {
            std::uint64_t tube_seed = options.seed + 1 + static_cast<std::uint64_t>(i);
            std::mt19937_64 rng(tube_seed);
            try {
                VirtualTube tube = random_valid_tube(rng);
                IntersectionReport ir = check_no_intersection_grid(
                    tube, options.grid_s_samples, options.grid_lambda_samples,
                    options.min_separation);
                worst = std::min(worst, ir.min_separation);
                if (!ir.ok) {
                    c.passed = false;
                    c.detail = fmt("seed %llu: ", static_cast<unsigned long long>(tube_seed)) +
                               describe_violation(ir);
                }
            } catch (const std::exception& e) {
                c.passed = false;
                c.detail = fmt("seed %llu: invalid geometry: %s",
                               static_cast<unsigned long long>(tube_seed), e.what());
            }
        }
        if (c.passed)
            c.detail = fmt("min separation %.3e m", worst);
        rep.checks.push_back(std::move(c));
    }

    if (options.random_trapezoids > 0) {
        ValidationCheck cube_check{fmt("cube inequality: %d random trapezoids",
                                       options.random_trapezoids), true, ""};
        ValidationCheck swap_check{fmt("swap energy: %d random trapezoids",
                                       options.random_trapezoids), true, ""};
        std::mt19937_64 rng(options.seed);
        double min_margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < options.random_trapezoids; ++i) {
            TrapezoidSample t = random_trapezoid(rng);
            if (cube_check.passed &&
                !trapezoid_cube_inequality(t.a_from, t.b_from, t.a_to, t.b_to)) {
                cube_check.passed = false;
                cube_check.detail = fmt(
                    "seed %llu sample %d: (%.4f,%.4f) (%.4f,%.4f) -> (%.4f,%.4f) (%.4f,%.4f)",
                    static_cast<unsigned long long>(options.seed), i,
                    t.a_from.x, t.a_from.y, t.b_from.x, t.b_from.y,
                    t.a_to.x, t.a_to.y, t.b_to.x, t.b_to.y);
            }
            SwapEnergies e = swap_energy_comparison(t.a_from, t.b_from, t.a_to, t.b_to,
                                                    0.5, 1.0, 1.0, 1.0);
            min_margin = std::min(min_margin, e.swapped - e.direct);
            if (swap_check.passed && !(e.swapped > e.direct)) {
                swap_check.passed = false;
                swap_check.detail = fmt(
                    "seed %llu sample %d: direct %.6e J >= swapped %.6e J",
                    static_cast<unsigned long long>(options.seed), i, e.direct, e.swapped);
            }
        }
        if (cube_check.passed)
            cube_check.detail = "all strict";
        if (swap_check.passed)
            swap_check.detail = fmt("min energy margin %.3e J", min_margin);
        rep.checks.push_back(std::move(cube_check));
        rep.checks.push_back(std::move(swap_check));
    }

    rep.all_passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                                 [](const ValidationCheck& c) { return c.passed; });
    return rep;
}

} // namespace tubeflow
