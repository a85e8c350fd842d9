#pragma once

#include <cmath>
#include <vector>

#include "sweep/geometry.hpp"
#include "sweep/model.hpp"

namespace sweep {

enum class SensorMode { circular, descending, linear_right, linear_left };

inline const char* to_string(SensorMode m) {
    switch (m) {
        case SensorMode::circular: return "circular";
        case SensorMode::descending: return "descending";
        case SensorMode::linear_right: return "linear-right";
        case SensorMode::linear_left: return "linear-left";
    }
    return "?";
}

/// Sensor placement at one instant. `angle`, `inner_radius` and
/// `outer_radius` describe radial placements; `segment` is always valid.
struct SensorPose {
    double angle = 0.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    SensorMode mode = SensorMode::circular;
    Segment segment;
};

/// One leg of the schedule. Circular legs rotate a radial segment about the
/// origin; the others translate the segment from `from` to `to`.
struct Phase {
    SensorMode mode = SensorMode::circular;
    double t0 = 0.0;
    double t1 = 0.0;
    int cycle = -1;  // circular sweep index; N for the radius-r sweep
    double inner = 0.0;
    double outer = 0.0;
    double angle0 = 0.0;
    Segment from;
    Segment to;
};

/// Angle of the radial sensor at the start of every circular sweep. The
/// worst point P = (0, R0) sits just behind it.
inline constexpr double kStartAngle = kPi / 2.0;

inline Segment radial_segment(double angle, double inner, double outer) {
    const Vec2 u = unit_at(angle);
    return {inner * u, outer * u};
}

inline SensorPose pose_in(const Phase& ph, double t) {
    SensorPose s;
    s.mode = ph.mode;
    const double span = ph.t1 - ph.t0;
    const double u = span > 0.0 ? std::clamp((t - ph.t0) / span, 0.0, 1.0) : 1.0;
    if (ph.mode == SensorMode::circular) {
        s.angle = ph.angle0 + kTwoPi * u;
        s.inner_radius = ph.inner;
        s.outer_radius = ph.outer;
        s.segment = radial_segment(s.angle, ph.inner, ph.outer);
        return s;
    }
    s.segment = {ph.from.a + u * (ph.to.a - ph.from.a), ph.from.b + u * (ph.to.b - ph.from.b)};
    s.angle = std::atan2(s.segment.b.y - s.segment.a.y, s.segment.b.x - s.segment.a.x);
    s.inner_radius = norm(s.segment.a);
    s.outer_radius = norm(s.segment.b);
    return s;
}

/// Pose timeline: N shrinking sweeps with inward advances, descent to the
/// radius-r sweep, a descent by r, then the right and left linear sweeps.
inline std::vector<Phase> build_timeline(const SweepPlan& plan) {
    const double r = plan.params.r;
    std::vector<Phase> out;
    double t = 0.0;
    auto radial = [&](double mid_from, double mid_to, double dur) {
        Phase ph;
        ph.mode = SensorMode::descending;
        ph.t0 = t;
        ph.t1 = t + dur;
        ph.from = radial_segment(kStartAngle, mid_from - r, mid_from + r);
        ph.to = radial_segment(kStartAngle, mid_to - r, mid_to + r);
        out.push_back(ph);
        t = ph.t1;
    };
    auto circle = [&](int index, double mid, double dur) {
        Phase ph;
        ph.mode = SensorMode::circular;
        ph.t0 = t;
        ph.t1 = t + dur;
        ph.cycle = index;
        ph.inner = mid - r;
        ph.outer = mid + r;
        ph.angle0 = kStartAngle;
        out.push_back(ph);
        t = ph.t1;
    };
    const int n = plan.n_iterations;
    for (int i = 0; i < n; ++i) {
        const CycleRecord& c = plan.cycles[static_cast<size_t>(i)];
        circle(i, c.radius, c.t_sweep);
        const double next = i + 1 < n ? plan.cycles[static_cast<size_t>(i) + 1].radius : r;
        radial(c.radius, next, c.t_in);
    }
    if (n == 0) radial(plan.params.R0, r, plan.t_in_total);
    const EndGameRecord& e = plan.end_game;
    circle(n, r, e.t_last_circle);

    // Descent by r leaves the sensor spanning y in [-r, r] on the x = 0 axis.
    Phase down;
    down.mode = SensorMode::descending;
    down.t0 = t;
    down.t1 = t + e.t_linear_descent;
    down.from = radial_segment(kStartAngle, 0.0, 2.0 * r);
    down.to = {{0.0, -r}, {0.0, r}};
    out.push_back(down);
    t = down.t1;

    const double vs = plan.vs;
    Phase right;
    right.mode = SensorMode::linear_right;
    right.t0 = t;
    right.t1 = t + e.t_right;
    right.from = down.to;
    right.to = {down.to.a + Vec2{vs * e.t_right, 0.0}, down.to.b + Vec2{vs * e.t_right, 0.0}};
    out.push_back(right);
    t = right.t1;

    Phase left;
    left.mode = SensorMode::linear_left;
    left.t0 = t;
    left.t1 = t + e.t_left;
    left.from = right.to;
    left.to = {right.to.a - Vec2{vs * e.t_left, 0.0}, right.to.b - Vec2{vs * e.t_left, 0.0}};
    out.push_back(left);
    return out;
}

}  // namespace sweep
