#include "tubeflow/dof.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>

namespace tubeflow {

namespace {

// Integration grid: trapezoid nodes allocated per curve piece so difference
// stencils never cross a join (element velocity can jump there).
struct PieceGrid {
    double lo, hi;
    int intervals;
};

std::vector<PieceGrid> piece_grids(const GeneratingCurve& curve, int n_s) {
    const auto& pieces = curve.pieces();
    double total = curve.s_end() - curve.s_begin();
    std::vector<PieceGrid> grids;
    grids.reserve(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        double lo = curve.piece_break(i);
        double hi = curve.piece_break(i + 1);
        int n = std::max(1, static_cast<int>(std::llround(n_s * (hi - lo) / total)));
        grids.push_back({lo, hi, n});
    }
    return grids;
}

// Work integrand per unit mass at the current seek point.
double work_integrand(const detail::SideKinematics::Kinematics& k, double mu) {
    Vec2 f = k.acceleration + (mu * k.velocity.norm()) * k.velocity;
    return f.dot(k.dpds);
}

// Walks the trapezoid grid once, handing (node weight) to a sink that
// evaluates every element it cares about at the seeked parameter.
void for_each_node(detail::SideKinematics& kin, const std::vector<PieceGrid>& grids,
                   const std::function<void(double weight)>& sink) {
    for (const auto& g : grids) {
        double ds = (g.hi - g.lo) / g.intervals;
        for (int k = 0; k <= g.intervals; ++k) {
            double s = (k == g.intervals) ? g.hi : g.lo + k * ds;
            kin.seek(s, g.lo, g.hi);
            double w = (k == 0 || k == g.intervals) ? 0.5 * ds : ds;
            sink(w);
        }
    }
}

} // namespace

double pairwise_sum(const std::vector<double>& values) {
    std::function<double(std::size_t, std::size_t)> sum =
        [&](std::size_t lo, std::size_t hi) -> double {
        if (hi - lo <= 4) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += values[i];
            return acc;
        }
        std::size_t mid = lo + (hi - lo) / 2;
        return sum(lo, mid) + sum(mid, hi);
    };
    return values.empty() ? 0.0 : sum(0, values.size());
}

double element_energy(const VirtualTube& tube, const FlowParams& params,
                      const ElementId& id, const QuadratureSpec& quadrature) {
    if (!(tube.s_end() > tube.s_begin())) return 0.0;
    detail::SideKinematics kin(tube, params, id.side);
    auto grids = piece_grids(tube.curve(), quadrature.n_s);
    double acc = 0.0;
    for_each_node(kin, grids, [&](double w) {
        acc += w * work_integrand(kin.at(id.lambda_init), params.resistance);
    });
    return acc;
}

double total_energy(const VirtualTube& tube, const FlowParams& params,
                    const QuadratureSpec& quadrature) {
    if (!(tube.s_end() > tube.s_begin())) return 0.0;
    int nl = std::max(1, quadrature.n_lambda);
    auto grids = piece_grids(tube.curve(), quadrature.n_s);

    std::vector<double> bucket_energy;
    bucket_energy.reserve(2 * static_cast<std::size_t>(nl));
    double density0 = params.total_mass / tube.width(tube.s_begin());
    for (Side side : {Side::upper, Side::lower}) {
        detail::SideKinematics kin(tube, params, side);
        std::vector<double> work(nl, 0.0);
        for_each_node(kin, grids, [&](double w) {
            for (int j = 0; j < nl; ++j) {
                double li = (j + 0.5) / nl;
                work[j] += w * work_integrand(kin.at(li), params.resistance);
            }
        });
        double dm = density0 * tube.radius(tube.s_begin(), side) / nl;
        for (int j = 0; j < nl; ++j) bucket_energy.push_back(work[j] * dm);
    }
    return pairwise_sum(bucket_energy);
}

ConvergenceError::ConvergenceError(double coarse_, double fine_, double rel_change_)
    : std::runtime_error("energy quadrature has not converged: E = " +
                         std::to_string(coarse_) + " vs " + std::to_string(fine_) +
                         " on a doubled grid (" + std::to_string(rel_change_ * 100.0) +
                         "% change)"),
      coarse(coarse_), fine(fine_), rel_change(rel_change_) {}

double total_energy_checked(const VirtualTube& tube, const FlowParams& params,
                            const QuadratureSpec& quadrature) {
    double coarse = total_energy(tube, params, quadrature);
    double fine = total_energy(tube, params, doubled(quadrature));
    double scale = std::max({std::abs(coarse), std::abs(fine), 1e-300});
    double rel = std::abs(fine - coarse) / scale;
    if (rel > 0.01) throw ConvergenceError(coarse, fine, rel);
    return coarse;
}

DofReport compute_dof(const VirtualTube& tube, const FlowParams& params,
                      const QuadratureSpec& quadrature, bool check_convergence) {
    DofReport report;
    report.tube_name = tube.name();
    report.params = params;
    report.quadrature = quadrature;

    int nl = std::max(1, quadrature.n_lambda);
    double density0 = params.total_mass / tube.width(tube.s_begin());
    report.per_element_energy.reserve(2 * static_cast<std::size_t>(nl));
    auto grids = piece_grids(tube.curve(), quadrature.n_s);
    std::vector<double> bucket_energy;
    bucket_energy.reserve(2 * static_cast<std::size_t>(nl));
    for (Side side : {Side::upper, Side::lower}) {
        detail::SideKinematics kin(tube, params, side);
        std::vector<double> work(nl, 0.0);
        for_each_node(kin, grids, [&](double w) {
            for (int j = 0; j < nl; ++j)
                work[j] += w * work_integrand(kin.at((j + 0.5) / nl), params.resistance);
        });
        double dm = density0 * tube.radius(tube.s_begin(), side) / nl;
        for (int j = 0; j < nl; ++j) {
            report.per_element_energy.push_back({side, (j + 0.5) / nl, work[j] * dm});
            bucket_energy.push_back(work[j] * dm);
        }
    }
    report.energy = pairwise_sum(bucket_energy);
    if (check_convergence) {
        double fine = total_energy(tube, params, doubled(quadrature));
        double scale = std::max({std::abs(report.energy), std::abs(fine), 1e-300});
        double rel = std::abs(fine - report.energy) / scale;
        if (rel > 0.01) throw ConvergenceError(report.energy, fine, rel);
    }
    report.average_width = average_width(tube, quadrature);
    report.dof = report.average_width / report.energy;
    return report;
}

} // namespace tubeflow
