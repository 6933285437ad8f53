#pragma once

namespace tubeflow {

/// Discretization used by width and energy integrals: n_s trapezoid steps
/// along the curve parameter, n_lambda midpoint buckets per tube side.
struct QuadratureSpec {
    int n_s = 4000;
    int n_lambda = 200;
};

inline QuadratureSpec doubled(const QuadratureSpec& q) {
    return {q.n_s * 2, q.n_lambda * 2};
}

} // namespace tubeflow
