#pragma once

#include <algorithm>
#include <cmath>

namespace sweep {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_at(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Segment {
    Vec2 a;
    Vec2 b;
};

inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

/// Closed intersection test; touching counts.
inline bool segments_intersect(const Segment& s, const Segment& t) {
    const double d1 = orient(t.a, t.b, s.a);
    const double d2 = orient(t.a, t.b, s.b);
    const double d3 = orient(s.a, s.b, t.a);
    const double d4 = orient(s.a, s.b, t.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(t.a, t.b, s.a)) return true;
    if (d2 == 0 && on_segment(t.a, t.b, s.b)) return true;
    if (d3 == 0 && on_segment(s.a, s.b, t.a)) return true;
    if (d4 == 0 && on_segment(s.a, s.b, t.b)) return true;
    return false;
}

inline double point_segment_distance(Vec2 p, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    double u = len2 > 0.0 ? dot(p - s.a, d) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    return norm(p - (s.a + u * d));
}

}  // namespace sweep
