#pragma once
// Planar geometry primitives: points, angles normalized to (-pi, pi],
// axis-aligned rectangles, segment/rectangle visibility tests.
// Everything here is a pure function over immutable values.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace swarmpath {

inline constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle in radians into the canonical interval (-pi, pi].
inline double wrap_pi(double radians) {
    double r = std::remainder(radians, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

/// Angle in radians, normalized to (-pi, pi] at construction.
class Angle {
public:
    Angle() = default;
    explicit Angle(double radians) : rad_(wrap_pi(radians)) {}

    double radians() const { return rad_; }

    friend bool operator==(Angle a, Angle b) { return a.rad_ == b.rad_; }

private:
    double rad_ = 0.0;
};

/// a - b wrapped into (-pi, pi]; signed_angle_diff(x, x) == 0.
inline Angle signed_angle_diff(Angle a, Angle b) {
    return Angle(a.radians() - b.radians());
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

/// Euclidean distance between two points.
inline double distance(Point2 a, Point2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// World-frame direction of the vector a -> b.
inline Angle direction(Point2 a, Point2 b) {
    return Angle(std::atan2(b.y - a.y, b.x - a.x));
}

/// Elevation angle |asin(|y1-y2| / d)| of the segment start->current,
/// in [0, pi/2]. Empty when the points coincide (caller treats the
/// degenerate case as "already home").
inline std::optional<Angle> homing_angle(Point2 start, Point2 current) {
    const double d = distance(start, current);
    if (d == 0.0) return std::nullopt;
    double ratio = std::abs(start.y - current.y) / d;
    if (ratio > 1.0) ratio = 1.0;  // guard rounding
    return Angle(std::asin(ratio));
}

/// Axis-aligned rectangle, min_corner < max_corner componentwise.
struct Rect {
    Point2 min_corner;
    Point2 max_corner;

    double width() const { return max_corner.x - min_corner.x; }
    double height() const { return max_corner.y - min_corner.y; }

    bool valid() const {
        return min_corner.x < max_corner.x && min_corner.y < max_corner.y;
    }
    bool contains(Point2 p) const {
        return p.x >= min_corner.x && p.x <= max_corner.x &&
               p.y >= min_corner.y && p.y <= max_corner.y;
    }
    bool contains_rect(const Rect& r) const {
        return r.min_corner.x >= min_corner.x && r.max_corner.x <= max_corner.x &&
               r.min_corner.y >= min_corner.y && r.max_corner.y <= max_corner.y;
    }
    bool strictly_contains(Point2 p, double margin = 0.0) const {
        return p.x > min_corner.x + margin && p.x < max_corner.x - margin &&
               p.y > min_corner.y + margin && p.y < max_corner.y - margin;
    }
    /// Positive-area overlap with another rectangle.
    bool overlaps(const Rect& r) const {
        return min_corner.x < r.max_corner.x && r.min_corner.x < max_corner.x &&
               min_corner.y < r.max_corner.y && r.min_corner.y < max_corner.y;
    }
    Rect inflated(double margin) const {
        return {{min_corner.x - margin, min_corner.y - margin},
                {max_corner.x + margin, max_corner.y + margin}};
    }
    /// Closest point of the (closed) rectangle to p.
    Point2 closest_point(Point2 p) const {
        return {std::clamp(p.x, min_corner.x, max_corner.x),
                std::clamp(p.y, min_corner.y, max_corner.y)};
    }
    double distance_to(Point2 p) const { return distance(p, closest_point(p)); }

    friend bool operator==(const Rect& a, const Rect& b) {
        return a.min_corner == b.min_corner && a.max_corner == b.max_corner;
    }
};

/// Obstacles are axis-aligned rectangles (v1).
using Obstacle = Rect;

namespace detail {

// Open parametric interval (lo, hi) of segment a+t(b-a) that lies strictly
// inside one slab min < coord < max. Returns false when empty.
inline bool open_slab_interval(double a, double d, double lo_bound, double hi_bound,
                               double& lo, double& hi) {
    if (d == 0.0) {
        return a > lo_bound && a < hi_bound;  // keeps current (lo, hi)
    }
    double t0 = (lo_bound - a) / d;
    double t1 = (hi_bound - a) / d;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > lo) lo = t0;
    if (t1 < hi) hi = t1;
    return lo < hi;
}

// True iff the open segment (a,b) meets the open interior of rect.
inline bool segment_hits_interior(Point2 a, Point2 b, const Rect& rect) {
    const Point2 d = b - a;
    double lo = 0.0, hi = 1.0;  // open segment
    if (!open_slab_interval(a.x, d.x, rect.min_corner.x, rect.max_corner.x, lo, hi))
        return false;
    if (!open_slab_interval(a.y, d.y, rect.min_corner.y, rect.max_corner.y, lo, hi))
        return false;
    return lo < hi;
}

}  // namespace detail

/// True iff the open segment (a,b) does not pass through the interior of
/// any obstacle. A segment that only grazes an obstacle boundary counts
/// as visible. Symmetric in a, b.
inline bool line_of_sight(Point2 a, Point2 b, std::span<const Obstacle> obstacles) {
    for (const Obstacle& ob : obstacles) {
        if (detail::segment_hits_interior(a, b, ob)) return false;
    }
    return true;
}

inline bool line_of_sight(Point2 a, Point2 b, const std::vector<Obstacle>& obstacles) {
    return line_of_sight(a, b, std::span<const Obstacle>(obstacles));
}

}  // namespace swarmpath
