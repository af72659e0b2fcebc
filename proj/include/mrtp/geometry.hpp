#pragma once

#include <algorithm>
#include <cmath>

namespace mrtp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    bool operator==(const Vec2& o) const = default;
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // radians, not normalized

    Vec2 position() const { return {x, y}; }
};

// Axis-aligned rectangle, closed on all sides. A point rectangle
// (min == max) is valid.
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    static Rect point(const Vec2& p) { return {p.x, p.y, p.x, p.y}; }

    bool contains(const Vec2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    bool intersects(const Rect& o) const {
        return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax && o.ymin <= ymax;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }

    // Euclidean distance from p to the rectangle (0 inside).
    double distance_to(const Vec2& p) const {
        const double dx = std::max({xmin - p.x, 0.0, p.x - xmax});
        const double dy = std::max({ymin - p.y, 0.0, p.y - ymax});
        return std::hypot(dx, dy);
    }

    bool operator==(const Rect& o) const = default;
};

inline double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    return a - M_PI;
}

// Absolute angular difference modulo 2*pi, in [0, pi].
inline double angle_dist(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace mrtp
