#include "tubeflow/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tubeflow {

namespace {

void check_lambda(double lambda_init) {
    if (!(lambda_init >= 0.0 && lambda_init <= 1.0))
        throw std::domain_error("lambda_init " + std::to_string(lambda_init) +
                                " outside [0, 1]");
}

} // namespace

double remap_lambda(const VirtualTube& tube, double s, const ElementId& id) {
    check_lambda(id.lambda_init);
    double s0 = tube.s_begin();
    double r0 = tube.radius(s0, id.side);
    double l0 = tube.width(s0);
    double r = tube.radius(s, id.side);
    double l = tube.width(s);
    return 1.0 - (1.0 - id.lambda_init) * r0 * l / (r * l0);
}

double time_of(const GeneratingCurve& curve, double s, double cross_speed) {
    if (!(cross_speed > 0.0))
        throw std::invalid_argument("cross_speed must be positive");
    return curve.arc_length(s) / cross_speed;
}

namespace detail {

SideKinematics::SideKinematics(const VirtualTube& tube, const FlowParams& params,
                               Side side)
    : tube_(&tube), params_(params), side_(side), sign_(side_sign(side)) {
    double s0 = tube.s_begin();
    r0_ = tube.radius(s0, side);
    inv_l0_ = 1.0 / tube.width(s0);
    h_ = (tube.s_end() - tube.s_begin()) * 1e-5;
}

SideKinematics::Basis SideKinematics::basis(double s) const {
    Frame f = frame_at(tube_->curve(), s);
    double r = tube_->radius(s, side_);
    double l = tube_->width(s);
    Vec2 offset_dir = (sign_) * f.normal;
    return {f.position + r * offset_dir,
            (-r0_ * l * inv_l0_) * offset_dir};
}

void SideKinematics::seek(double s) {
    const auto& curve = tube_->curve();
    std::size_t i = curve.piece_index(s);
    seek(s, curve.piece_break(i), curve.piece_break(i + 1));
}

void SideKinematics::seek(double s, double lo, double hi) {
    s_ = s;
    heff_ = std::min(h_, (hi - lo) / 4.0);
    for (int j = -2; j <= 2; ++j) {
        double q = s + j * heff_;
        bool ok = q >= lo - 1e-12 && q <= hi + 1e-12;
        valid_[j + 2] = ok;
        if (!ok) continue;
        q = std::clamp(q, lo, hi);
        pts_[j + 2] = basis(q);
        sdot_[j + 2] = params_.cross_speed / tube_->curve().speed(q);
    }
    density_ = params_.total_mass / tube_->width(s);
    lambda_scale_ = r0_ * tube_->width(s) * inv_l0_ / tube_->radius(s, side_);
}

SideKinematics::Kinematics SideKinematics::at(double lambda_init) const {
    double w = 1.0 - lambda_init;
    auto p = [&](int j) {
        const Basis& b = pts_[j + 2];
        return b.fixed + w * b.span;
    };
    // First differences, one-sided where the stencil leaves the clamp span.
    auto dpds_at = [&](int j) -> Vec2 {
        if (valid_[j + 1] && valid_[j + 3])
            return (p(j + 1) - p(j - 1)) / (2.0 * heff_);
        if (valid_[j + 3])
            return (p(j + 1) - p(j)) / heff_;
        return (p(j) - p(j - 1)) / heff_;
    };
    auto vel_at = [&](int j) { return dpds_at(j) * sdot_[j + 2]; };

    Kinematics k;
    k.position = p(0);
    k.dpds = dpds_at(0);
    k.velocity = k.dpds * sdot_[2];
    if (valid_[1] && valid_[3])
        k.acceleration = (vel_at(1) - vel_at(-1)) / (2.0 * heff_) * sdot_[2];
    else if (valid_[3])
        k.acceleration = (vel_at(1) - k.velocity) / heff_ * sdot_[2];
    else
        k.acceleration = (k.velocity - vel_at(-1)) / heff_ * sdot_[2];
    k.lambda = 1.0 - w * lambda_scale_;
    return k;
}

} // namespace detail

FlowState element_state(const VirtualTube& tube, const FlowParams& params,
                        double s, const ElementId& id) {
    check_lambda(id.lambda_init);
    detail::SideKinematics kin(tube, params, id.side);
    kin.seek(s);
    auto k = kin.at(id.lambda_init);
    return {s, k.position, k.velocity, k.acceleration, k.lambda, kin.density()};
}

Vec2 element_force(const FlowState& state, const FlowParams& params,
                   double mass_fraction) {
    Vec2 v = state.velocity;
    return mass_fraction * (state.acceleration + params.resistance * v.norm() * v);
}

std::vector<FieldSample> sample_flow_field(const VirtualTube& tube,
                                           const FlowParams& params,
                                           std::span<const double> s_grid,
                                           std::span<const double> lambda_grid) {
    std::vector<FieldSample> out;
    out.reserve(2 * s_grid.size() * lambda_grid.size());
    for (Side side : {Side::upper, Side::lower}) {
        detail::SideKinematics kin(tube, params, side);
        for (double s : s_grid) {
            kin.seek(s);
            for (double li : lambda_grid) {
                check_lambda(li);
                auto k = kin.at(li);
                out.push_back({{side, li},
                               {s, k.position, k.velocity, k.acceleration,
                                k.lambda, kin.density()}});
            }
        }
    }
    return out;
}

} // namespace tubeflow
