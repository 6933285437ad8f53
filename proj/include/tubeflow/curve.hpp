#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "tubeflow/vec2.hpp"

namespace tubeflow {

// A generating curve is an ordered chain of pieces, each covering a span of the
// global parameter s. s is *not* required to be arc length; lines and arcs
// default to unit-speed parameterization, cubic pieces carry whatever speed
// their coefficients imply. The curve must be connected (joins within 1e-9 m),
// tangent-continuous (join angle below 1e-6 rad) and regular (dγ/ds never 0).

struct LinePiece {
    Vec2 start;
    Vec2 end;
};

/// Circular arc from angle0 to angle1 around center; the sign of
/// (angle1 - angle0) selects the turn direction.
struct ArcPiece {
    Vec2 center;
    double radius = 1.0;
    double angle0 = 0.0;
    double angle1 = 1.0;
};

/// Cubic polynomial piece over local u in [0,1]:
/// x(u) = sum x[i] u^i, y(u) = sum y[i] u^i.
struct CubicPiece {
    std::array<double, 4> x{};
    std::array<double, 4> y{};
};

using PieceGeometry = std::variant<LinePiece, ArcPiece, CubicPiece>;

struct CurvePiece {
    PieceGeometry geometry;
    double s_length = 0.0; ///< parameter span covered by this piece; > 0
};

/// Natural parameter span: geometric length for lines/arcs, 1 for cubics.
double natural_length(const PieceGeometry& g);

struct Frame {
    Vec2 position;
    Vec2 tangent; ///< unit
    Vec2 normal;  ///< tangent rotated +90 degrees
};

class GeneratingCurve {
public:
    GeneratingCurve(std::vector<CurvePiece> pieces, double s_begin = 0.0);

    double s_begin() const { return s_begin_; }
    double s_end() const { return s_begin_ + total_span_; }
    const std::vector<CurvePiece>& pieces() const { return pieces_; }
    /// Global s where piece i starts; piece_break(pieces().size()) == s_end().
    double piece_break(std::size_t i) const { return s_begin_ + prefix_[i]; }
    std::size_t piece_index(double s) const;

    Vec2 position(double s) const;
    Vec2 derivative(double s) const; ///< dγ/ds
    double speed(double s) const;    ///< |dγ/ds|
    Vec2 tangent(double s) const;
    Vec2 normal(double s) const;
    double curvature(double s) const; ///< signed; positive bends toward +normal

    /// Arc length accumulated from s_begin.
    double arc_length(double s) const;
    double total_arc_length() const { return arc_length(s_end()); }

    /// Checks connectivity, tangent continuity and regularity; throws
    /// std::invalid_argument describing the first violation.
    void validate() const;

    // Convenience builders.
    static GeneratingCurve straight(Vec2 from, Vec2 to);
    /// Chain of arcs sharing radius; one arc per sweep angle, positive sweep
    /// turns left. Starts at `start` heading along angle `heading`.
    static GeneratingCurve arc_chain(Vec2 start, double heading, double radius,
                                     std::span<const double> sweeps);
    /// Graph y = f(x) over [x0, x1] as `n_pieces` cubic Hermite pieces matching
    /// f and df at the knots; s runs over [x0, x1].
    static GeneratingCurve from_graph(const std::function<double(double)>& f,
                                      const std::function<double(double)>& df,
                                      double x0, double x1, int n_pieces);

private:
    std::vector<CurvePiece> pieces_;
    double s_begin_ = 0.0;
    double total_span_ = 0.0;
    std::vector<double> prefix_; ///< prefix_[i] = span before piece i; size n+1

    // Cumulative arc-length table, subdivided per piece so no quadrature
    // interval straddles a join.
    struct ArcTable {
        std::vector<double> s;   ///< node parameters, ascending
        std::vector<double> len; ///< cumulative arc length at node
    };
    ArcTable table_;
    void build_arc_table();

    // (piece index, local u) for a global s clamped to the domain.
    std::pair<std::size_t, double> locate(double s) const;
};

/// Position plus unit tangent and left normal at s.
Frame frame_at(const GeneratingCurve& curve, double s);

} // namespace tubeflow
