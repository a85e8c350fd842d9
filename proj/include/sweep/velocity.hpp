#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include "sweep/errors.hpp"
#include "sweep/model.hpp"

namespace sweep {

/// Universal lower bound on the sweeper speed: pi*R0*VT/r.
inline double v_lower_bound(const SearchParams& p) { return kPi * p.R0 * p.VT / p.r; }

/// Speed at which one revolution takes exactly r/VT.
inline double v_one_cycle(const SearchParams& p) { return kTwoPi * p.R0 * p.VT / p.r; }

inline double v_critical_arc(const SearchParams& p) {
    return (kTwoPi + std::asin(p.r / p.R0)) * p.R0 * p.VT / p.r;
}

inline double v_critical_taylor(const SearchParams& p) { return v_one_cycle(p) + p.VT; }

inline double v_s2(const SearchParams& p) {
    const double s = p.R0 + p.r;
    const double root = std::sqrt(p.R0 * s * (kPi * kPi * p.R0 * s + p.r * p.r));
    return (kPi * p.R0 * p.VT * s + p.VT * root) / (p.r * s);
}

/// v_critical_taylor - v_s2 in rationalized form (no cancellation).
inline double velocity_gap_vc_vs2(const SearchParams& p) {
    const double s = p.R0 + p.r;
    const double root = std::sqrt(p.R0 * s * (kPi * kPi * p.R0 * s + p.r * p.r));
    return p.VT * (kTwoPi * p.R0 * s + p.r * p.r) / (s * (kPi * p.R0 + p.r) + root);
}

/// Upper end of the time window in which the envelope gap is examined.
inline double gap_window(double vs, const SearchParams& p) { return kPi * p.R0 / (2.0 * vs); }

/// f(t, vs): normalized squared distance from the outer sensor tip to the
/// worst point minus the squared wavefront radius. Nonnegative means no escape.
/// Evaluated as 2 sin^2(theta/2) + k (r - VT c)(r + VT c) to avoid cancellation.
inline double envelope_gap(double t, double vs, const SearchParams& p) {
    const double c = kTwoPi * p.R0 / vs + t;
    const double k = 1.0 / (2.0 * p.R0 * (p.R0 + p.r));
    const double half = std::sin(vs * t / (2.0 * p.R0));
    return 2.0 * half * half + k * (p.r - p.VT * c) * (p.r + p.VT * c);
}

inline double envelope_gap_derivative(double t, double vs, const SearchParams& p) {
    const double c = kTwoPi * p.R0 / vs + t;
    return -p.VT * p.VT / (p.R0 * (p.R0 + p.r)) * c + std::sin(vs * t / p.R0) * vs / p.R0;
}

struct EnvelopeGap {
    double vs = 0.0;
    double k = 0.0;
    double l = 0.0;
    double quad_a = 0.0;
    double quad_b = 0.0;
    double quad_c = 0.0;
    double m_small = 0.0;  // selected root of the quadratic in M
    double m_large = 0.0;
    double t_star = 0.0;   // sqrt(m_small) - 2*pi*R0/vs, clamped to the window
    bool clamped = false;
    double f_at_t_star = 0.0;
    double t_min = 0.0;    // stationary point of f in the window
    double f_min = 0.0;
};

/// Minimizer of f(., vs) on [0, pi*R0/(2 vs)]. f' is negative at 0 and concave
/// on the window, so a sign change brackets the unique interior minimum.
inline std::pair<double, double> minimize_envelope_gap(double vs, const SearchParams& p) {
    const double w = gap_window(vs, p);
    if (envelope_gap_derivative(w, vs, p) <= 0.0) return {w, envelope_gap(w, vs, p)};
    double lo = 0.0;
    double hi = w;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (envelope_gap_derivative(mid, vs, p) < 0.0) lo = mid; else hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    return {t, envelope_gap(t, vs, p)};
}

/// Closed-form t* from the quadratic in M = (2*pi*R0/vs + t)^2, smaller root.
/// Also reports the stationary minimizer for comparison.
inline EnvelopeGap t_star_exact(double vs, const SearchParams& p) {
    if (!(vs > 0.0)) throw DomainError("vs", "must be positive");
    EnvelopeGap g;
    g.vs = vs;
    const double s = p.R0 + p.r;
    const double vt2 = p.VT * p.VT;
    g.k = 1.0 / (2.0 * p.R0 * s);
    g.l = vt2 * vt2 / (vs * vs * s * s);
    g.quad_a = g.k * g.k * vt2 * vt2;
    g.quad_b = g.l - 2.0 * g.k * g.k * p.r * p.r * vt2 - 2.0 * g.k * vt2;
    g.quad_c = 2.0 * g.k * p.r * p.r + g.k * g.k * std::pow(p.r, 4);
    const double disc = g.quad_b * g.quad_b - 4.0 * g.quad_a * g.quad_c;
    if (disc < 0.0) {
        throw NumericalError("negative discriminant: a=" + std::to_string(g.quad_a) +
                             " b=" + std::to_string(g.quad_b) + " c=" + std::to_string(g.quad_c));
    }
    // Stable pair of roots; both are positive because a, c > 0 and b < 0.
    const double q = -0.5 * (g.quad_b + std::copysign(std::sqrt(disc), g.quad_b));
    const double m1 = q / g.quad_a;
    const double m2 = g.quad_c / q;
    g.m_small = std::min(m1, m2);
    g.m_large = std::max(m1, m2);
    const double w = gap_window(vs, p);
    const double t = std::sqrt(g.m_small) - kTwoPi * p.R0 / vs;
    g.t_star = std::clamp(t, 0.0, w);
    g.clamped = g.t_star != t;
    g.f_at_t_star = envelope_gap(g.t_star, vs, p);
    std::tie(g.t_min, g.f_min) = minimize_envelope_gap(vs, p);
    return g;
}

inline double t_star_approx(double vs, const SearchParams& p) {
    const double denom = vs * vs * (p.R0 + p.r) - p.VT * p.VT * p.R0;
    if (!(denom > 0.0)) throw DomainError("vs", "vs^2 (R0 + r) must exceed VT^2 R0");
    return kTwoPi * p.R0 * p.R0 * p.VT * p.VT / (vs * denom);
}

/// Smallest value of f over the window; the no-escape certificate for speed v.
inline double critical_gap(double v, const SearchParams& p) { return minimize_envelope_gap(v, p).second; }

/// Bisection for the speed at which the minimum of f crosses zero.
/// Stops once the bracket is narrower than eps and |g(v)| <= eps.
inline double bisect_critical(double lo, double hi, double eps, const SearchParams& p,
                              int max_iter = 200) {
    if (!(eps > 0.0)) throw DomainError("eps", "must be positive");
    const double g_lo = critical_gap(lo, p);
    const double g_hi = critical_gap(hi, p);
    if (!(lo < hi) || !(g_lo < 0.0) || !(g_hi > 0.0)) throw BracketError(g_lo, g_hi);
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = critical_gap(mid, p);
        if (g == 0.0 || (hi - lo <= eps && std::abs(g) <= eps)) return mid;
        if (g < 0.0) lo = mid; else hi = mid;
    }
    throw MaxIterError(max_iter);
}

struct CriticalVelocitySet {
    double v_lb = 0.0;
    double v_one_cycle = 0.0;
    double v_c_arc = 0.0;
    double v_c_taylor = 0.0;
    double v_s2 = 0.0;
    double v_bisection = 0.0;
    double epsilon = 0.0;
};

inline CriticalVelocitySet critical_velocities(const SearchParams& params, double eps = 1e-9) {
    const SearchParams p = validate(params);
    CriticalVelocitySet c;
    c.v_lb = v_lower_bound(p);
    c.v_one_cycle = v_one_cycle(p);
    c.v_c_arc = v_critical_arc(p);
    c.v_c_taylor = v_critical_taylor(p);
    c.v_s2 = v_s2(p);
    c.epsilon = eps;
    c.v_bisection = bisect_critical(c.v_one_cycle, c.v_c_arc, eps, p);
    return c;
}

}  // namespace sweep
