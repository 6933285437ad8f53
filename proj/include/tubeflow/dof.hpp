#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tubeflow/flowfield.hpp"
#include "tubeflow/quadrature.hpp"
#include "tubeflow/tube.hpp"

namespace tubeflow {

/// Transport work of one element over the whole tube, in joules per unit mass.
/// Trapezoid rule along s (piece by piece), integrand f · dp/ds with
/// f = acceleration + mu |v| v.
double element_energy(const VirtualTube& tube, const FlowParams& params,
                      const ElementId& id, const QuadratureSpec& quadrature = {});

/// Total transport energy: element energies weighted by element mass
/// dm = density(s0) * r(s0, side) / n_lambda, summed over midpoint lambda
/// buckets of both sides with a fixed pairwise order.
double total_energy(const VirtualTube& tube, const FlowParams& params,
                    const QuadratureSpec& quadrature = {});

struct ConvergenceError : std::runtime_error {
    ConvergenceError(double coarse, double fine, double rel_change);
    double coarse;
    double fine;
    double rel_change;
};

/// total_energy that re-evaluates on a doubled grid and throws
/// ConvergenceError if the two results differ by more than 1%.
double total_energy_checked(const VirtualTube& tube, const FlowParams& params,
                            const QuadratureSpec& quadrature = {});

struct ElementEnergy {
    Side side;
    double lambda_center;
    double energy; ///< joules, element mass included
};

struct DofReport {
    std::string tube_name;
    double energy = 0.0;        ///< J
    double average_width = 0.0; ///< m
    double dof = 0.0;           ///< m/J, = average_width / energy
    std::vector<ElementEnergy> per_element_energy;
    FlowParams params;
    QuadratureSpec quadrature;
};

/// Energy, mean width and their ratio for one tube. With check_convergence the
/// energy pass uses total_energy_checked.
DofReport compute_dof(const VirtualTube& tube, const FlowParams& params = {},
                      const QuadratureSpec& quadrature = {},
                      bool check_convergence = false);

/// Deterministic reduction used for all energy sums.
double pairwise_sum(const std::vector<double>& values);

} // namespace tubeflow
