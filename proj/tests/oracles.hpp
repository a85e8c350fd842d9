#pragma once

// Reference computations written independently of the library: literal
// formulas, explicit geometry and step-by-step iteration.

#include <algorithm>
#include <cmath>
#include <limits>

#include "sweep/model.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// Gap in its textbook form 1 + (r^2 - VT^2 c^2) / (2 R0 (R0 + r)) - cos(theta).
inline double literal_gap(double t, double vs, const sweep::SearchParams& p) {
    const double c = 2.0 * kPi * p.R0 / vs + t;
    return 1.0 + (p.r * p.r - p.VT * p.VT * c * c) / (2.0 * p.R0 * (p.R0 + p.r)) - std::cos(vs * t / p.R0);
}

/// Same gap from positions: squared tip-to-P distance minus squared front
/// radius, normalized by 2 R0 (R0 + r).
inline double geometric_gap(double t, double vs, const sweep::SearchParams& p) {
    const double th = vs * t / p.R0;
    const double tx = -(p.R0 + p.r) * std::sin(th);
    const double ty = (p.R0 + p.r) * std::cos(th);
    const double dx = tx;
    const double dy = ty - p.R0;
    const double front = p.VT * (2.0 * kPi * p.R0 / vs + t);
    return (dx * dx + dy * dy - front * front) / (2.0 * p.R0 * (p.R0 + p.r));
}

struct DenseMin {
    double t = 0.0;
    double f = std::numeric_limits<double>::infinity();
};

inline DenseMin dense_min(double vs, const sweep::SearchParams& p, int n) {
    const double w = kPi * p.R0 / (2.0 * vs);
    DenseMin m;
    for (int j = 0; j < n; ++j) {
        const double t = w * j / (n - 1);
        const double f = literal_gap(t, vs, p);
        if (f < m.f) m = {t, f};
    }
    return m;
}

struct Iteration {
    int n = 0;
    double last_radius = 0.0;
    double t_in = 0.0;
    double t_circular = 0.0;
};

/// Shrinks the bounding radius one sweep at a time until it is at most r.
/// Each sweep takes 2 pi R / vs and is followed by an inward move of
/// (r (vs - VT) - 2 pi R VT) / (vs + VT) at speed vs; the final move goes to
/// the centre, and a radius-r sweep closes the circular phase.
inline Iteration iterate(double vs, const sweep::SearchParams& p) {
    Iteration it;
    double R = p.R0;
    while (R > p.r + 1e-12) {
        it.t_circular += 2.0 * kPi * R / vs;
        const double step = (p.r * (vs - p.VT) - 2.0 * kPi * R * p.VT) / (vs + p.VT);
        R -= step;
        ++it.n;
        if (R > p.r + 1e-12) it.t_in += step / vs;
        if (it.n > 100000) break;
    }
    it.last_radius = R;
    it.t_in += R / vs;
    it.t_circular += 2.0 * kPi * p.r / vs;
    return it;
}

/// Direct end-game inequality: the linear sweep must finish before the
/// leftover region of radius r_last reaches the sensor tips.
inline bool end_game_feasible(double vs, const sweep::SearchParams& p) {
    const double r_last = p.r * p.VT * (2.0 * kPi + 1.0) / vs;
    const double t_right = r_last / (vs - p.VT);
    const double t_left = 2.0 * vs * r_last / ((vs - p.VT) * (vs - p.VT));
    return (p.r - r_last) / p.VT > t_right + t_left;
}

inline bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
