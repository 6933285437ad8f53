#include "tubeflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tubeflow/curve.hpp"

namespace tubeflow {

namespace {

constexpr double kPxPerMeter = 20.0;
constexpr double kPadMeters = 1.0;

struct Shape {
    std::vector<Vec2> points;
    std::string style;
    bool closed = false;
};

// Collects world-space shapes, then maps them to pixel space in one pass once
// the bounding box is known. Y is flipped so world +y points up on screen.
class Canvas {
public:
    void add(std::vector<Vec2> points, std::string style, bool closed = false) {
        for (const Vec2& p : points) {
            min_x_ = std::min(min_x_, p.x);
            max_x_ = std::max(max_x_, p.x);
            min_y_ = std::min(min_y_, p.y);
            max_y_ = std::max(max_y_, p.y);
        }
        shapes_.push_back({std::move(points), std::move(style), closed});
    }

    std::string finish() const {
        double min_x = min_x_, max_x = max_x_, min_y = min_y_, max_y = max_y_;
        if (min_x > max_x) {
            min_x = min_y = 0.0;
            max_x = max_y = 1.0;
        }
        double width = (max_x - min_x + 2.0 * kPadMeters) * kPxPerMeter;
        double height = (max_y - min_y + 2.0 * kPadMeters) * kPxPerMeter;

        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
            << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
            << ' ' << fmt(height) << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
        for (const Shape& shape : shapes_) {
            if (shape.points.size() < 2) continue;
            out << (shape.closed ? "<polygon points=\"" : "<polyline points=\"");
            for (std::size_t i = 0; i < shape.points.size(); ++i) {
                const Vec2& p = shape.points[i];
                if (i != 0) out << ' ';
                out << fmt((p.x - min_x + kPadMeters) * kPxPerMeter) << ','
                    << fmt((max_y - p.y + kPadMeters) * kPxPerMeter);
            }
            out << "\" " << shape.style << "/>\n";
        }
        out << "</svg>\n";
        return out.str();
    }

private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }

    std::vector<Shape> shapes_;
    double min_x_ = std::numeric_limits<double>::infinity();
    double max_x_ = -std::numeric_limits<double>::infinity();
    double min_y_ = std::numeric_limits<double>::infinity();
    double max_y_ = -std::numeric_limits<double>::infinity();
};

const char* kBoundaryStyle =
    "fill=\"none\" stroke=\"#2563eb\" stroke-width=\"2\"";
const char* kCenterStyle =
    "fill=\"none\" stroke=\"#6b7280\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"";
const char* kEndStyle = "fill=\"none\" stroke=\"#111827\" stroke-width=\"2\"";
const char* kArrowStyle = "fill=\"none\" stroke=\"#dc2626\" stroke-width=\"1.2\"";

void add_tube_outline(Canvas& canvas, const VirtualTube& tube) {
    const GeneratingCurve& curve = tube.curve();
    double s0 = curve.s_begin();
    double s1 = curve.s_end();
    // Roughly four samples per meter of arc length, enough that arcs read as
    // smooth at the fixed pixel scale.
    int n = std::max(65, static_cast<int>(std::ceil((s1 - s0) * 4.0)) + 1);
    std::vector<Vec2> upper, lower, center;
    upper.reserve(n);
    lower.reserve(n);
    center.reserve(n);
    for (int i = 0; i < n; ++i) {
        double s = s0 + (s1 - s0) * static_cast<double>(i) / (n - 1);
        upper.push_back(tube.boundary_point(s, Side::upper));
        lower.push_back(tube.boundary_point(s, Side::lower));
        center.push_back(curve.position(s));
    }
    canvas.add(std::move(upper), kBoundaryStyle);
    canvas.add(std::move(lower), kBoundaryStyle);
    canvas.add(std::move(center), kCenterStyle);
    canvas.add({tube.boundary_point(s0, Side::upper), tube.boundary_point(s0, Side::lower)},
               kEndStyle);
    canvas.add({tube.boundary_point(s1, Side::upper), tube.boundary_point(s1, Side::lower)},
               kEndStyle);
}

void add_arrow(Canvas& canvas, Vec2 from, Vec2 to) {
    Vec2 d{to.x - from.x, to.y - from.y};
    double len = d.norm();
    if (len < 1e-9) return;
    Vec2 u{d.x / len, d.y / len};
    double head = std::min(0.25, 0.35 * len);
    // Barbs at +-25 degrees off the shaft.
    double c = std::cos(std::numbers::pi * 25.0 / 180.0);
    double s = std::sin(std::numbers::pi * 25.0 / 180.0);
    Vec2 back1{to.x - head * (c * u.x - s * u.y), to.y - head * (s * u.x + c * u.y)};
    Vec2 back2{to.x - head * (c * u.x + s * u.y), to.y - head * (-s * u.x + c * u.y)};
    canvas.add({from, to}, kArrowStyle);
    canvas.add({back1, to, back2}, kArrowStyle);
}

std::string speed_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto mix = [t](int a, int b) {
        return static_cast<int>(std::lround(a + (b - a) * t));
    };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(0x3b, 0xef),
                  mix(0x82, 0x44), mix(0xf6, 0x44));
    return buf;
}

} // namespace

std::string render_tube_svg(const VirtualTube& tube) {
    Canvas canvas;
    add_tube_outline(canvas, tube);
    return canvas.finish();
}

std::string render_field_svg(const VirtualTube& tube, const FlowParams& params,
                             int n_s, int n_lambda, double arrow_seconds) {
    if (n_s < 2) throw std::invalid_argument("render_field_svg: n_s must be >= 2");
    if (n_lambda < 1) throw std::invalid_argument("render_field_svg: n_lambda must be >= 1");
    if (arrow_seconds <= 0.0)
        throw std::invalid_argument("render_field_svg: arrow_seconds must be > 0");

    Canvas canvas;
    add_tube_outline(canvas, tube);

    double s0 = tube.curve().s_begin();
    double s1 = tube.curve().s_end();
    std::vector<double> s_grid(n_s);
    for (int i = 0; i < n_s; ++i)
        s_grid[i] = s0 + (s1 - s0) * static_cast<double>(i) / (n_s - 1);
    // Include the shared center trajectory once; per-side lanes stay strictly
    // inside the boundary (lambda = 1 arrows would sit on the wall).
    std::vector<double> lambda_grid;
    lambda_grid.push_back(0.0);
    for (int j = 1; j <= n_lambda; ++j)
        lambda_grid.push_back(static_cast<double>(j) / (n_lambda + 1));

    for (const FieldSample& sample : sample_flow_field(tube, params, s_grid, lambda_grid)) {
        if (sample.id.side == Side::lower && sample.id.lambda_init == 0.0)
            continue; // both sides share the lambda = 0 trajectory
        Vec2 p = sample.state.position;
        Vec2 v = sample.state.velocity;
        add_arrow(canvas, p, {p.x + arrow_seconds * v.x, p.y + arrow_seconds * v.y});
    }
    return canvas.finish();
}

std::string render_trajectories_svg(const VirtualTube& tube,
                                    const std::vector<TrajectoryTrace>& traces) {
    Canvas canvas;
    add_tube_outline(canvas, tube);

    double v_lo = std::numeric_limits<double>::infinity();
    double v_hi = -std::numeric_limits<double>::infinity();
    for (const TrajectoryTrace& trace : traces) {
        v_lo = std::min(v_lo, trace.v_max);
        v_hi = std::max(v_hi, trace.v_max);
    }
    for (const TrajectoryTrace& trace : traces) {
        if (trace.points.size() < 2) continue;
        double t = v_hi > v_lo ? (trace.v_max - v_lo) / (v_hi - v_lo) : 0.5;
        canvas.add(trace.points,
                   "fill=\"none\" stroke=\"" + speed_color(t) +
                       "\" stroke-width=\"1\" stroke-opacity=\"0.8\"");
    }
    return canvas.finish();
}

} // namespace tubeflow
