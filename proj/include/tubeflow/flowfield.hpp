#pragma once

#include <array>
#include <span>
#include <vector>

#include "tubeflow/tube.hpp"

namespace tubeflow {

/// A mass element of the transported cross section, identified by its side and
/// its relative offset on the *initial* cross section.
struct ElementId {
    Side side = Side::upper;
    double lambda_init = 0.0; ///< in [0, 1]; 0 = generating curve, 1 = boundary
};

struct FlowParams {
    double cross_speed = 1.0; ///< cross-section travel speed along the curve, m/s
    double resistance = 0.5;  ///< drag coefficient mu in f = dm (a + mu |v| v)
    double total_mass = 1.0;  ///< mass carried by one cross section, kg
};

struct FlowState {
    double s = 0.0;
    Vec2 position;
    Vec2 velocity;
    Vec2 acceleration;
    double lambda = 0.0;  ///< remapped offset at s
    double density = 0.0; ///< cross-section linear density at s, kg/m
};

/// Offset of an element at parameter s. Mass fraction between the element and
/// its side boundary is conserved, which fixes
///   lambda(s) = 1 - (1 - lambda_init) * r(s0, side) * l(s) / (r(s, side) * l(s0)).
double remap_lambda(const VirtualTube& tube, double s, const ElementId& id);

/// Arrival time of the cross section at s (arc length / cross_speed).
double time_of(const GeneratingCurve& curve, double s, double cross_speed);

/// Position, velocity, acceleration, offset and density of one element when its
/// cross section sits at s. Derivatives use central differences with step
/// (s_end - s_begin) * 1e-5, one-sided at domain and piece ends (element
/// velocity is discontinuous where curvature jumps, so stencils never span a
/// piece join).
FlowState element_state(const VirtualTube& tube, const FlowParams& params,
                        double s, const ElementId& id);

/// Transport force on an element of mass `mass_fraction`:
/// f = dm * (acceleration + mu * |v| * v).
Vec2 element_force(const FlowState& state, const FlowParams& params,
                   double mass_fraction);

struct FieldSample {
    ElementId id;
    FlowState state;
};

/// Dense evaluation over both sides: for each side (upper first), each s in
/// s_grid (outer), each lambda_init in lambda_grid (inner).
std::vector<FieldSample> sample_flow_field(const VirtualTube& tube,
                                           const FlowParams& params,
                                           std::span<const double> s_grid,
                                           std::span<const double> lambda_grid);

namespace detail {

/// Shared element evaluator for one tube side. seek() fixes the cross-section
/// parameter and precomputes the five-point stencil; at() is then cheap per
/// element, which is what the energy quadrature leans on.
class SideKinematics {
public:
    SideKinematics(const VirtualTube& tube, const FlowParams& params, Side side);

    /// Stencil confined to the curve piece containing s.
    void seek(double s);
    /// Stencil confined to [lo, hi] (a piece span; used by per-piece loops).
    void seek(double s, double lo, double hi);

    struct Kinematics {
        Vec2 position;
        Vec2 velocity;
        Vec2 acceleration;
        Vec2 dpds; ///< d(position)/ds at the seek parameter
        double lambda;
    };
    Kinematics at(double lambda_init) const;

    double density() const { return density_; }
    double fd_step() const { return h_; }

private:
    struct Basis {
        Vec2 fixed; ///< boundary point of this side
        Vec2 span;  ///< position = fixed + (1 - lambda_init) * span
    };
    Basis basis(double s) const;

    const VirtualTube* tube_;
    FlowParams params_;
    Side side_;
    double sign_;
    double r0_;     // side radius at domain start
    double inv_l0_; // 1 / width at domain start
    double h_;      // finite-difference step

    // Stencil at q_j = s + j*h, j in [-2, 2]; entries outside the clamp span
    // are invalid and the difference formulas fall back to one-sided forms.
    std::array<Basis, 5> pts_;
    std::array<double, 5> sdot_;
    std::array<bool, 5> valid_;
    double heff_ = 0.0;
    double s_ = 0.0;
    double density_ = 0.0;
    double lambda_scale_ = 1.0; // lambda = 1 - (1 - lambda_init) * lambda_scale_
};

} // namespace detail

} // namespace tubeflow
