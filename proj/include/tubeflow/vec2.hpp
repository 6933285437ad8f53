#pragma once

#include <cmath>

namespace tubeflow {

/// Plain 2D vector. Everything downstream works in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr Vec2 operator/(double k) const { return {x / k, y / k}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double k) { x *= k; y *= k; return *this; }

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    /// z-component of the 3D cross product; positive when `o` is CCW from *this.
    constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
    /// Rotation by +90 degrees (counterclockwise).
    constexpr Vec2 rot90() const { return {-y, x}; }
};

constexpr Vec2 operator*(double k, Vec2 v) { return {v.x * k, v.y * k}; }

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

} // namespace tubeflow
