#pragma once

#include <cmath>
#include <numbers>

#include "mmuplink/error.hpp"

namespace mmuplink {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Planar position or displacement, kilometres.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
    bool contains(Vec2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
    bool contains(const Rect& r) const
    {
        return r.x_min >= x_min && r.x_max <= x_max && r.y_min >= y_min && r.y_max <= y_max;
    }
    Rect scaled(double s) const { return {s * x_min, s * y_min, s * x_max, s * y_max}; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Square of side `side` centred on `center`.
inline Rect centered_square(Vec2 center, double side)
{
    return {center.x - 0.5 * side, center.y - 0.5 * side, center.x + 0.5 * side, center.y + 0.5 * side};
}

/// Maps any finite angle onto [0, 2pi).
inline double normalize_angle(double theta)
{
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

/// Bearing of `to` seen from `from`, in [0, 2pi).
inline double bearing(Vec2 from, Vec2 to)
{
    const Vec2 d = to - from;
    if (d.x == 0.0 && d.y == 0.0)
        throw UndefinedAngle("bearing between coincident points");
    return normalize_angle(std::atan2(d.y, d.x));
}

} // namespace mmuplink
