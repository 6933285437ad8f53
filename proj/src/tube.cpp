#include "tubeflow/tube.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tubeflow {

double side_theta(Side s) { return s == Side::upper ? 0.0 : std::numbers::pi; }

RadiusProfile RadiusProfile::constant(double r, double s0, double s1) {
    return piecewise_linear({s0, s1}, {r, r});
}

RadiusProfile RadiusProfile::piecewise_linear(std::vector<double> s,
                                              std::vector<double> r) {
    if (s.size() != r.size() || s.size() < 2)
        throw std::invalid_argument("radius profile needs matching s/r arrays with at least 2 knots");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1]))
            throw std::invalid_argument("radius profile knots must be strictly increasing in s");
    for (double v : r)
        if (!(v > 0.0))
            throw std::invalid_argument("radius profile values must be positive");
    RadiusProfile p;
    p.s_ = std::move(s);
    p.r_ = std::move(r);
    return p;
}

RadiusProfile RadiusProfile::sampled(const std::function<double(double)>& f,
                                     double s0, double s1, int n_knots) {
    if (n_knots < 2 || !(s1 > s0))
        throw std::invalid_argument("sampled profile needs s1 > s0 and n_knots >= 2");
    std::vector<double> s(n_knots), r(n_knots);
    for (int i = 0; i < n_knots; ++i) {
        s[i] = s0 + (s1 - s0) * i / (n_knots - 1);
        r[i] = f(s[i]);
    }
    return piecewise_linear(std::move(s), std::move(r));
}

double RadiusProfile::value(double s) const {
    if (s <= s_.front()) return r_.front();
    if (s >= s_.back()) return r_.back();
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    double t = (s - s_[i]) / (s_[i + 1] - s_[i]);
    return r_[i] + t * (r_[i + 1] - r_[i]);
}

VirtualTube::VirtualTube(GeneratingCurve curve, RadiusProfile upper,
                         RadiusProfile lower, std::string name)
    : curve_(std::move(curve)), upper_(std::move(upper)), lower_(std::move(lower)),
      name_(std::move(name)) {}

double VirtualTube::width(double s) const {
    return upper_.value(s) + lower_.value(s);
}

Vec2 VirtualTube::point_at(double s, Side side, double lambda) const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::domain_error("lambda " + std::to_string(lambda) + " outside [0, 1]");
    Frame f = frame_at(curve_, s);
    return f.position + (lambda * radius(s, side) * side_sign(side)) * f.normal;
}

void VirtualTube::validate(int n_samples) const {
    curve_.validate();
    if (n_samples < 2) n_samples = 2;
    double s0 = s_begin(), s1 = s_end();
    for (int i = 0; i < n_samples; ++i) {
        double s = s0 + (s1 - s0) * i / (n_samples - 1);
        double ru = upper_.value(s), rl = lower_.value(s);
        if (!(ru > 0.0) || !(rl > 0.0))
            throw std::invalid_argument("tube '" + name_ + "': non-positive radius at s = " +
                                        std::to_string(s));
        double kappa = curve_.curvature(s);
        // Cross sections fan out on the convex side and converge on the
        // concave side; they stay disjoint iff r < 1/|kappa| there.
        if (kappa > 0.0 && ru * kappa >= 1.0)
            throw std::invalid_argument(
                "tube '" + name_ + "': upper radius " + std::to_string(ru) +
                " reaches the curvature center at s = " + std::to_string(s) +
                " (1/kappa = " + std::to_string(1.0 / kappa) + ")");
        if (kappa < 0.0 && rl * (-kappa) >= 1.0)
            throw std::invalid_argument(
                "tube '" + name_ + "': lower radius " + std::to_string(rl) +
                " reaches the curvature center at s = " + std::to_string(s) +
                " (1/kappa = " + std::to_string(-1.0 / kappa) + ")");
    }
}

double average_width(const VirtualTube& tube, const QuadratureSpec& quadrature) {
    double s0 = tube.s_begin(), s1 = tube.s_end();
    if (!(s1 > s0))
        throw std::domain_error("average width undefined on a degenerate domain");
    int n = std::max(1, quadrature.n_s);
    double h = (s1 - s0) / n;
    double acc = 0.5 * (tube.width(s0) + tube.width(s1));
    for (int i = 1; i < n; ++i)
        acc += tube.width(s0 + i * h);
    return acc * h / (s1 - s0);
}

VirtualTube modify_tube(const VirtualTube& tube, const ModificationParams& params,
                        double step) {
    if (!(params.alpha > 1.0))
        throw std::invalid_argument("modification alpha must exceed 1");
    if (!(params.beta > 0.0))
        throw std::invalid_argument("modification beta must be positive");
    double s0 = tube.s_begin(), s1 = tube.s_end();
    if (step <= 0.0) step = (s1 - s0) / 1000.0;
    int n = std::max(1, static_cast<int>(std::lround((s1 - s0) / step)));
    double h = (s1 - s0) / n;

    auto integrate_side = [&](Side side) {
        const RadiusProfile& raw = tube.profile(side);
        double cap = params.alpha * raw.value(s0);
        std::vector<double> s(n + 1), r(n + 1);
        s[0] = s0;
        r[0] = raw.value(s0);
        for (int k = 1; k <= n; ++k) {
            s[k] = s0 + k * h;
            // Expansion is rate-limited and capped; shrinking follows the raw
            // profile so the finishing cross section is preserved.
            double grown = std::min(cap, r[k - 1] + params.beta * h);
            r[k] = std::min(raw.value(s[k]), grown);
        }
        return RadiusProfile::piecewise_linear(std::move(s), std::move(r));
    };

    return VirtualTube(tube.curve(), integrate_side(Side::upper),
                       integrate_side(Side::lower), tube.name());
}

} // namespace tubeflow
