#include "tubeflow/canonical.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tubeflow {

namespace {

constexpr double kLength = 40.0;
// Wave tube: y(x) = kWaveAmp sin^2(pi x / L) sin(2 pi kWavePeriods x / L).
// The sin^2 window keeps position and slope zero at both ends; amplitude and
// period count are chosen so the banks stay clear of the curvature centers
// (max r*kappa ~ 0.88).
constexpr double kWaveAmp = 0.8;
constexpr int kWavePeriods = 4;

VirtualTube make_a() {
    auto curve = GeneratingCurve::straight({0.0, 0.0}, {kLength, 0.0});
    return {curve, RadiusProfile::constant(2.0, 0.0, kLength),
            RadiusProfile::constant(2.0, 0.0, kLength), "A"};
}

VirtualTube make_b() {
    auto curve = GeneratingCurve::straight({0.0, 0.0}, {kLength, 0.0});
    auto bulge = RadiusProfile::piecewise_linear({0.0, 20.0, 40.0}, {2.0, 3.0, 2.0});
    VirtualTube raw{curve, bulge, bulge, "B"};
    return modify_tube(raw, {1.3, 0.05});
}

VirtualTube make_c() {
    auto curve = GeneratingCurve::straight({0.0, 0.0}, {kLength, 0.0});
    auto throat = RadiusProfile::piecewise_linear({0.0, 20.0, 40.0}, {2.0, 1.0, 2.0});
    return {curve, throat, throat, "C"};
}

VirtualTube make_d() {
    // Four arcs L,R,R,L of radius 12 and equal sweep; horizontal end tangents
    // and sin(sweep) = 5/6 put the endpoints exactly 40 m apart.
    double sweep = std::asin(5.0 / 6.0);
    double sweeps[] = {sweep, -sweep, -sweep, sweep};
    auto curve = GeneratingCurve::arc_chain({0.0, 0.0}, 0.0, 12.0, sweeps);
    double s1 = curve.s_end();
    return {curve, RadiusProfile::constant(2.0, 0.0, s1),
            RadiusProfile::constant(2.0, 0.0, s1), "D"};
}

VirtualTube make_e() {
    auto wave = [](double x) {
        double w = std::sin(std::numbers::pi * x / kLength);
        return kWaveAmp * w * w * std::sin(2.0 * std::numbers::pi * kWavePeriods * x / kLength);
    };
    auto slope = [](double x) {
        double p1 = std::numbers::pi / kLength;
        double p2 = 2.0 * std::numbers::pi * kWavePeriods / kLength;
        double w = std::sin(p1 * x);
        return kWaveAmp * (2.0 * w * std::cos(p1 * x) * p1 * std::sin(p2 * x) +
                           w * w * p2 * std::cos(p2 * x));
    };
    auto curve = GeneratingCurve::from_graph(wave, slope, 0.0, kLength, 64);
    double s1 = curve.s_end();

    // Per-side radii: distance along the cross-section normal to the straight
    // banks y = +-2, so the tube walls stay on those lines while the axis waves.
    auto to_line = [&curve](double s, double line_y) {
        Frame f = frame_at(curve, s);
        return (line_y - f.position.y) / f.normal.y;
    };
    auto upper = RadiusProfile::sampled(
        [&](double s) { return to_line(s, 2.0); }, 0.0, s1, 1001);
    auto lower = RadiusProfile::sampled(
        [&](double s) { return -to_line(s, -2.0); }, 0.0, s1, 1001);
    return {curve, upper, lower, "E"};
}

} // namespace

std::vector<VirtualTube> canonical_tubes() {
    return {make_a(), make_b(), make_c(), make_d(), make_e()};
}

VirtualTube canonical_tube(char name) {
    switch (std::toupper(static_cast<unsigned char>(name))) {
    case 'A': return make_a();
    case 'B': return make_b();
    case 'C': return make_c();
    case 'D': return make_d();
    case 'E': return make_e();
    default:
        throw std::invalid_argument(std::string("no canonical tube named '") + name + "'");
    }
}

bool is_canonical_name(const std::string& name) {
    if (name.size() != 1) return false;
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    return c >= 'A' && c <= 'E';
}

} // namespace tubeflow
