#pragma once

#include <cmath>

namespace fmm {

/// A point on the simulation plane, in meters.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double squared_distance(Point a, Point b)
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    return dx * dx + dy * dy;
}

inline double euclidean_distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Point at fraction `s` in [0,1] of the way from `a` to `b`.
inline Point lerp(Point a, Point b, double s) { return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}; }

}  // namespace fmm
