#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace mazgrid {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

struct Box2 {
    Vec2 lo, hi;
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
    bool contains_box(const Box2& b) const { return contains(b.lo) && contains(b.hi); }
    // strict interior overlap (touching edges do not count)
    bool interior_overlaps(const Box2& b) const {
        return lo.x < b.hi.x && b.lo.x < hi.x && lo.y < b.hi.y && b.lo.y < hi.y;
    }
};

inline double dist_point_box(Vec2 p, const Box2& b) {
    double dx = std::max({b.lo.x - p.x, 0.0, p.x - b.hi.x});
    double dy = std::max({b.lo.y - p.y, 0.0, p.y - b.hi.y});
    return std::hypot(dx, dy);
}

// Piecewise curve made of straight segments and circular arcs; used for
// wall rasterization, so only arc-length sampling is needed.
struct CurvePiece {
    enum Kind { Segment, Arc } kind;
    // Segment: a -> b.  Arc: center c, radius r, angles t0 -> t1 (radians).
    Vec2 a, b;
    Vec2 c;
    double r = 0.0, t0 = 0.0, t1 = 0.0;

    static CurvePiece segment(Vec2 a, Vec2 b) {
        CurvePiece p;
        p.kind = Segment;
        p.a = a;
        p.b = b;
        return p;
    }
    static CurvePiece arc(Vec2 center, double radius, double t0, double t1) {
        CurvePiece p;
        p.kind = Arc;
        p.c = center;
        p.r = radius;
        p.t0 = t0;
        p.t1 = t1;
        return p;
    }
    double length() const {
        return kind == Segment ? dist(a, b) : std::abs(t1 - t0) * r;
    }
    Vec2 at(double s) const { // s in [0, 1]
        if (kind == Segment) return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
        double t = t0 + s * (t1 - t0);
        return {c.x + r * std::cos(t), c.y + r * std::sin(t)};
    }
};

using Curve = std::vector<CurvePiece>;

// Contour at distance `t` from the axis-aligned square [q0,q1]^2, restricted to
// a half plane {x >= cut} (open_left) or {x <= cut} (open to the right).
// Three straight sides plus two corner quarter-circles.
inline Curve offset_square_arc(const Box2& q, double t, bool open_left) {
    Curve cv;
    if (open_left) {
        // runs from (q.lo.x, q.hi.y + t) around the right side to (q.lo.x, q.lo.y - t)
        cv.push_back(CurvePiece::segment({q.lo.x, q.hi.y + t}, {q.hi.x, q.hi.y + t}));
        cv.push_back(CurvePiece::arc({q.hi.x, q.hi.y}, t, M_PI / 2, 0.0));
        cv.push_back(CurvePiece::segment({q.hi.x + t, q.hi.y}, {q.hi.x + t, q.lo.y}));
        cv.push_back(CurvePiece::arc({q.hi.x, q.lo.y}, t, 0.0, -M_PI / 2));
        cv.push_back(CurvePiece::segment({q.hi.x, q.lo.y - t}, {q.lo.x, q.lo.y - t}));
    } else {
        cv.push_back(CurvePiece::segment({q.hi.x, q.hi.y + t}, {q.lo.x, q.hi.y + t}));
        cv.push_back(CurvePiece::arc({q.lo.x, q.hi.y}, t, M_PI / 2, M_PI));
        cv.push_back(CurvePiece::segment({q.lo.x - t, q.hi.y}, {q.lo.x - t, q.lo.y}));
        cv.push_back(CurvePiece::arc({q.lo.x, q.lo.y}, t, M_PI, 3 * M_PI / 2));
        cv.push_back(CurvePiece::segment({q.lo.x, q.lo.y - t}, {q.hi.x, q.lo.y - t}));
    }
    return cv;
}

} // namespace mazgrid
