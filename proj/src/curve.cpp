#include "tubeflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tubeflow {

namespace {

constexpr double kJoinPositionTol = 1e-9;  // meters
constexpr double kJoinAngleTol = 1e-6;     // radians
constexpr double kMinSpeed = 1e-9;         // regularity floor for |dγ/ds|

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussX = {
    -0.9061798459386640, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

struct Eval {
    Vec2 p;  // position
    Vec2 d1; // d/du
    Vec2 d2; // d2/du2
};

Eval eval_piece(const PieceGeometry& g, double u) {
    if (const auto* line = std::get_if<LinePiece>(&g)) {
        Vec2 d = line->end - line->start;
        return {line->start + u * d, d, {0.0, 0.0}};
    }
    if (const auto* arc = std::get_if<ArcPiece>(&g)) {
        double sweep = arc->angle1 - arc->angle0;
        double a = arc->angle0 + u * sweep;
        double c = std::cos(a), s = std::sin(a);
        Vec2 radial{arc->radius * c, arc->radius * s};
        return {arc->center + radial,
                sweep * Vec2{-radial.y, radial.x},
                -(sweep * sweep) * radial};
    }
    const auto& cu = std::get<CubicPiece>(g);
    const auto& cx = cu.x;
    const auto& cy = cu.y;
    Vec2 p{((cx[3] * u + cx[2]) * u + cx[1]) * u + cx[0],
           ((cy[3] * u + cy[2]) * u + cy[1]) * u + cy[0]};
    Vec2 d1{(3.0 * cx[3] * u + 2.0 * cx[2]) * u + cx[1],
            (3.0 * cy[3] * u + 2.0 * cy[2]) * u + cy[1]};
    Vec2 d2{6.0 * cx[3] * u + 2.0 * cx[2], 6.0 * cy[3] * u + 2.0 * cy[2]};
    return {p, d1, d2};
}

std::string piece_kind(const PieceGeometry& g) {
    if (std::holds_alternative<LinePiece>(g)) return "line";
    if (std::holds_alternative<ArcPiece>(g)) return "arc";
    return "cubic";
}

} // namespace

double natural_length(const PieceGeometry& g) {
    if (const auto* line = std::get_if<LinePiece>(&g))
        return distance(line->start, line->end);
    if (const auto* arc = std::get_if<ArcPiece>(&g))
        return arc->radius * std::abs(arc->angle1 - arc->angle0);
    return 1.0;
}

GeneratingCurve::GeneratingCurve(std::vector<CurvePiece> pieces, double s_begin)
    : pieces_(std::move(pieces)), s_begin_(s_begin) {
    if (pieces_.empty())
        throw std::invalid_argument("generating curve needs at least one piece");
    prefix_.resize(pieces_.size() + 1);
    prefix_[0] = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (!(pieces_[i].s_length > 0.0))
            throw std::invalid_argument("curve piece " + std::to_string(i) +
                                        " has non-positive parameter span");
        prefix_[i + 1] = prefix_[i] + pieces_[i].s_length;
    }
    total_span_ = prefix_.back();
    build_arc_table();
}

std::size_t GeneratingCurve::piece_index(double s) const {
    double rel = s - s_begin_;
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), rel);
    std::size_t i = static_cast<std::size_t>(it - prefix_.begin());
    if (i == 0) return 0;
    if (i > pieces_.size()) return pieces_.size() - 1;
    return i - 1;
}

std::pair<std::size_t, double> GeneratingCurve::locate(double s) const {
    double rel = s - s_begin_;
    double slack = 1e-9 * std::max(1.0, total_span_);
    if (rel < -slack || rel > total_span_ + slack)
        throw std::domain_error("curve parameter " + std::to_string(s) +
                                " outside domain [" + std::to_string(s_begin_) +
                                ", " + std::to_string(s_end()) + "]");
    rel = std::clamp(rel, 0.0, total_span_);
    std::size_t i = piece_index(s_begin_ + rel);
    double u = (rel - prefix_[i]) / pieces_[i].s_length;
    return {i, std::clamp(u, 0.0, 1.0)};
}

Vec2 GeneratingCurve::position(double s) const {
    auto [i, u] = locate(s);
    return eval_piece(pieces_[i].geometry, u).p;
}

Vec2 GeneratingCurve::derivative(double s) const {
    auto [i, u] = locate(s);
    return eval_piece(pieces_[i].geometry, u).d1 / pieces_[i].s_length;
}

double GeneratingCurve::speed(double s) const { return derivative(s).norm(); }

Vec2 GeneratingCurve::tangent(double s) const { return derivative(s).normalized(); }

Vec2 GeneratingCurve::normal(double s) const { return tangent(s).rot90(); }

double GeneratingCurve::curvature(double s) const {
    auto [i, u] = locate(s);
    Eval e = eval_piece(pieces_[i].geometry, u);
    double sp = e.d1.norm();
    return e.d1.cross(e.d2) / (sp * sp * sp);
}

void GeneratingCurve::build_arc_table() {
    table_.s.clear();
    table_.len.clear();
    table_.s.push_back(s_begin_);
    table_.len.push_back(0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& piece = pieces_[i];
        int nsub = std::max(32, static_cast<int>(std::ceil(piece.s_length * 8.0)));
        double du = 1.0 / nsub;
        for (int k = 0; k < nsub; ++k) {
            double u0 = k * du;
            double seg = 0.0;
            for (int q = 0; q < 5; ++q) {
                double u = u0 + 0.5 * du * (1.0 + kGaussX[q]);
                seg += kGaussW[q] * eval_piece(piece.geometry, u).d1.norm();
            }
            acc += seg * 0.5 * du;
            table_.s.push_back(s_begin_ + prefix_[i] + (k + 1) * du * piece.s_length);
            table_.len.push_back(acc);
        }
    }
}

double GeneratingCurve::arc_length(double s) const {
    auto [i, u] = locate(s);
    double rel = prefix_[i] + u * pieces_[i].s_length;
    double abs_s = s_begin_ + rel;
    auto it = std::upper_bound(table_.s.begin(), table_.s.end(), abs_s);
    std::size_t k = static_cast<std::size_t>(it - table_.s.begin());
    if (k == 0) return 0.0;
    --k;
    if (k + 1 >= table_.s.size()) return table_.len.back();
    // Partial Gauss integral from the table node to s, inside one piece.
    double s_node = table_.s[k];
    double span = abs_s - s_node;
    if (span <= 0.0) return table_.len[k];
    double u_node = (s_node - s_begin_ - prefix_[i]) / pieces_[i].s_length;
    double du = span / pieces_[i].s_length;
    double seg = 0.0;
    for (int q = 0; q < 5; ++q) {
        double uu = u_node + 0.5 * du * (1.0 + kGaussX[q]);
        seg += kGaussW[q] * eval_piece(pieces_[i].geometry, uu).d1.norm();
    }
    return table_.len[k] + seg * 0.5 * du;
}

void GeneratingCurve::validate() const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& g = pieces_[i].geometry;
        // Regularity: sample |dγ/du| across the piece.
        for (int k = 0; k <= 16; ++k) {
            double u = k / 16.0;
            double sp = eval_piece(g, u).d1.norm() / pieces_[i].s_length;
            if (sp < kMinSpeed)
                throw std::invalid_argument(
                    "curve piece " + std::to_string(i) + " (" + piece_kind(g) +
                    ") is not regular: |dgamma/ds| = " + std::to_string(sp) +
                    " at u = " + std::to_string(u));
        }
        if (i + 1 == pieces_.size()) continue;
        const auto& next = pieces_[i + 1].geometry;
        Eval a = eval_piece(g, 1.0);
        Eval b = eval_piece(next, 0.0);
        double gap = distance(a.p, b.p);
        if (gap > kJoinPositionTol)
            throw std::invalid_argument(
                "curve pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
                " are disconnected: gap " + std::to_string(gap) + " m");
        Vec2 ta = a.d1.normalized();
        Vec2 tb = b.d1.normalized();
        double angle = std::atan2(std::abs(ta.cross(tb)), ta.dot(tb));
        if (!(angle < kJoinAngleTol))
            throw std::invalid_argument(
                "tangent break of " + std::to_string(angle) + " rad between pieces " +
                std::to_string(i) + " and " + std::to_string(i + 1));
    }
}

GeneratingCurve GeneratingCurve::straight(Vec2 from, Vec2 to) {
    CurvePiece piece{LinePiece{from, to}, distance(from, to)};
    return GeneratingCurve({piece});
}

GeneratingCurve GeneratingCurve::arc_chain(Vec2 start, double heading, double radius,
                                           std::span<const double> sweeps) {
    if (!(radius > 0.0))
        throw std::invalid_argument("arc chain radius must be positive");
    std::vector<CurvePiece> pieces;
    Vec2 p = start;
    double psi = heading;
    for (double sweep : sweeps) {
        if (sweep == 0.0)
            throw std::invalid_argument("arc chain sweep must be nonzero");
        double side = sweep > 0.0 ? 1.0 : -1.0; // +1 turns left
        double to_center_angle = psi + side * std::numbers::pi / 2.0;
        Vec2 to_center{std::cos(to_center_angle), std::sin(to_center_angle)};
        Vec2 center = p + radius * to_center;
        double a0 = std::atan2(p.y - center.y, p.x - center.x);
        double a1 = a0 + sweep;
        pieces.push_back({ArcPiece{center, radius, a0, a1},
                          radius * std::abs(sweep)});
        psi += sweep;
        p = center + radius * Vec2{std::cos(a1), std::sin(a1)};
    }
    return GeneratingCurve(std::move(pieces));
}

GeneratingCurve GeneratingCurve::from_graph(const std::function<double(double)>& f,
                                            const std::function<double(double)>& df,
                                            double x0, double x1, int n_pieces) {
    if (!(x1 > x0) || n_pieces < 1)
        throw std::invalid_argument("from_graph needs x1 > x0 and n_pieces >= 1");
    int n = n_pieces;
    double h = (x1 - x0) / n;
    std::vector<double> y(n + 1);
    for (int i = 0; i <= n; ++i) y[i] = f(x0 + i * h);

    // Clamped C2 spline: knot slopes from the tridiagonal continuity system,
    // end slopes taken from df so joins carry no curvature breaks.
    std::vector<double> m(n + 1), cp(n + 1), dp(n + 1);
    m[0] = df(x0);
    m[n] = df(x1);
    if (n > 1) {
        // rows i = 1..n-1:  m[i-1] + 4 m[i] + m[i+1] = 3 (y[i+1] - y[i-1]) / h
        double rhs1 = 3.0 * (y[2] - y[0]) / h - m[0];
        if (n == 2) rhs1 -= m[n];
        cp[1] = 1.0 / 4.0;
        dp[1] = rhs1 / 4.0;
        for (int i = 2; i < n; ++i) {
            double rhs = 3.0 * (y[i + 1] - y[i - 1]) / h;
            if (i == n - 1) rhs -= m[n];
            double denom = 4.0 - cp[i - 1];
            cp[i] = 1.0 / denom;
            dp[i] = (rhs - dp[i - 1]) / denom;
        }
        m[n - 1] = dp[n - 1];
        for (int i = n - 2; i >= 1; --i) m[i] = dp[i] - cp[i] * m[i + 1];
    }

    std::vector<CurvePiece> pieces;
    pieces.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double xa = x0 + i * h;
        double ya = y[i], yb = y[i + 1];
        double ma = m[i] * h, mb = m[i + 1] * h; // dy/du on the local piece
        CubicPiece cu;
        cu.x = {xa, h, 0.0, 0.0};
        cu.y = {ya, ma, 3.0 * (yb - ya) - 2.0 * ma - mb, 2.0 * (ya - yb) + ma + mb};
        pieces.push_back({cu, h});
    }
    return GeneratingCurve(std::move(pieces), x0);
}

Frame frame_at(const GeneratingCurve& curve, double s) {
    Vec2 t = curve.tangent(s);
    return {curve.position(s), t, t.rot90()};
}

} // namespace tubeflow
