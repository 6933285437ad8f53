#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tubeflow/curve.hpp"
#include "tubeflow/quadrature.hpp"
#include "tubeflow/vec2.hpp"

namespace tubeflow {

/// The two halves of a tube, split by the generating curve. `upper` lies along
/// +normal, `lower` along -normal.
enum class Side { upper, lower };

constexpr double side_sign(Side s) { return s == Side::upper ? 1.0 : -1.0; }
/// Angle identifying the side on a cross section: 0 for upper, pi for lower.
double side_theta(Side s);
constexpr const char* side_name(Side s) { return s == Side::upper ? "upper" : "lower"; }

/// Half-width of one tube side as a function of the curve parameter, stored as
/// piecewise-linear samples. Evaluation clamps outside the knot range.
class RadiusProfile {
public:
    static RadiusProfile constant(double r, double s0, double s1);
    static RadiusProfile piecewise_linear(std::vector<double> s, std::vector<double> r);
    /// Samples f on n_knots equally spaced knots over [s0, s1].
    static RadiusProfile sampled(const std::function<double(double)>& f,
                                 double s0, double s1, int n_knots = 1001);

    double value(double s) const;
    const std::vector<double>& knots_s() const { return s_; }
    const std::vector<double>& knots_r() const { return r_; }

private:
    RadiusProfile() = default;
    std::vector<double> s_;
    std::vector<double> r_;
};

/// Rate-limited widening pass: alpha caps the radius at alpha * r(s0),
/// beta caps the expansion rate in meters of radius per meter of s.
struct ModificationParams {
    double alpha = 1.3;
    double beta = 0.05;
};

/// A planar virtual tube: generating curve plus one radius profile per side.
/// The boundary on side th is position(s) + radius(s, th) * cos(th) * normal(s).
class VirtualTube {
public:
    VirtualTube(GeneratingCurve curve, RadiusProfile upper, RadiusProfile lower,
                std::string name = "");

    const GeneratingCurve& curve() const { return curve_; }
    const RadiusProfile& profile(Side side) const {
        return side == Side::upper ? upper_ : lower_;
    }
    const std::string& name() const { return name_; }
    double s_begin() const { return curve_.s_begin(); }
    double s_end() const { return curve_.s_end(); }

    double radius(double s, Side side) const { return profile(side).value(s); }
    /// Cross-section width r(s, upper) + r(s, lower).
    double width(double s) const;
    /// Point at relative offset lambda in [0, 1] from the curve toward the
    /// side boundary; lambda = 1 is the boundary itself.
    Vec2 point_at(double s, Side side, double lambda) const;
    Vec2 boundary_point(double s, Side side) const { return point_at(s, side, 1.0); }

    /// Curve validity plus positive radii plus the cross-section condition
    /// r(s) < 1/|curvature| on the concave side, sampled at n_samples points.
    /// Throws std::invalid_argument on the first violation.
    void validate(int n_samples = 2001) const;

private:
    GeneratingCurve curve_;
    RadiusProfile upper_;
    RadiusProfile lower_;
    std::string name_;
};

/// Mean width over the parameter domain (trapezoid rule, quadrature.n_s steps).
double average_width(const VirtualTube& tube, const QuadratureSpec& quadrature = {});

/// Applies the rate-limited widening to both sides independently and returns
/// the rebuilt tube. `step` is the forward-integration step; by default the
/// domain is split into 1000 steps. Requires alpha > 1 and beta > 0.
VirtualTube modify_tube(const VirtualTube& tube, const ModificationParams& params,
                        double step = 0.0);

} // namespace tubeflow
