#pragma once

#include <algorithm>
#include <cmath>

#include "sweep/errors.hpp"
#include "sweep/model.hpp"
#include "sweep/velocity.hpp"

namespace sweep {

/// R_{i+1} = c3 * R_i + c1; c4 = (2*pi/vs) * c1.
struct RecursionCoefficients {
    double c1 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double fixed_point = 0.0;
};

inline RecursionCoefficients recursion_coefficients(double vs, const SearchParams& p) {
    if (!(vs > p.VT)) throw DomainError("vs", "must exceed VT");
    RecursionCoefficients c;
    c.c1 = -p.r * (vs - p.VT) / (vs + p.VT);
    c.c3 = 1.0 + kTwoPi * p.VT / (vs + p.VT);
    c.c4 = kTwoPi / vs * c.c1;
    c.fixed_point = p.r * (vs - p.VT) / (kTwoPi * p.VT);
    return c;
}

struct Advance {
    double delta = 0.0;      // advance allowed by the spread during one sweep
    double delta_eff = 0.0;  // advance achieved while the region keeps spreading
    double t_in = 0.0;
};

inline Advance advance_distance(int i, double R_i, double vs, const SearchParams& p) {
    (void)i;
    Advance a;
    a.delta = (p.r * (vs - p.VT) - kTwoPi * R_i * p.VT) / vs;
    // Rounding slack so that vs exactly at the Taylor critical speed gives zero.
    if (a.delta < -1e-12 * std::max(p.r, R_i)) throw NoProgressError(R_i, a.delta);
    a.delta = std::max(a.delta, 0.0);
    a.delta_eff = a.delta * vs / (vs + p.VT);
    a.t_in = a.delta_eff / vs;
    return a;
}

inline double radius_at(int i, double vs, const SearchParams& p) {
    const RecursionCoefficients c = recursion_coefficients(vs, p);
    return std::pow(c.c3, i) * (p.R0 - c.fixed_point) + c.fixed_point;
}

inline constexpr double kStopSlack = 1e-12;

/// Number of circular sweeps until the bounding radius drops to r.
inline int num_iterations(double vs, const SearchParams& p) {
    if (p.R0 <= p.r + kStopSlack) return 0;
    if (!(vs > v_critical_taylor(p))) throw DomainError("vs", "must exceed the Taylor critical velocity");
    const RecursionCoefficients c = recursion_coefficients(vs, p);
    const double ratio = (c.fixed_point - p.r) / (c.fixed_point - p.R0);
    const double x = std::log(ratio) / std::log1p(kTwoPi * p.VT / (vs + p.VT));
    if (!std::isfinite(x)) throw NumericalError("iteration count is not finite");
    int n = static_cast<int>(std::ceil(x));
    // The ceiling can land one off when R_N sits on r to rounding accuracy.
    while (n > 0 && radius_at(n - 1, vs, p) <= p.r + kStopSlack) --n;
    while (radius_at(n, vs, p) > p.r + kStopSlack) ++n;
    return n;
}

struct AggregateTimes {
    double t_in_total = 0.0;
    double t_circular_total = 0.0;
};

/// Closed-form totals. t_in_total ends with the final descent R_N/vs;
/// t_circular_total ends with the radius-r sweep 2*pi*r/vs.
inline AggregateTimes aggregate_times(double vs, const SearchParams& p) {
    const int n = num_iterations(vs, p);
    AggregateTimes t;
    const double last_circle = kTwoPi * p.r / vs;
    if (n == 0) {
        t.t_in_total = p.R0 / vs;
        t.t_circular_total = last_circle;
        return t;
    }
    const RecursionCoefficients c = recursion_coefficients(vs, p);
    const double lead = kTwoPi * p.R0 * p.VT - p.r * (vs - p.VT);
    t.t_in_total = p.R0 / vs + std::pow(c.c3, n - 1) * lead / (vs * (vs + p.VT));
    // Geometric sum of 2*pi*R_i/vs for i < n, grouped around the fixed point.
    const double excess = p.R0 - c.fixed_point;
    t.t_circular_total = excess * (std::pow(c.c3, n) - 1.0) * (vs + p.VT) / (vs * p.VT) +
                         kTwoPi * n * c.fixed_point / vs + last_circle;
    return t;
}

inline EndGameRecord end_game(double vs, const SearchParams& p) {
    if (!(vs > p.VT)) throw DomainError("vs", "must exceed VT");
    EndGameRecord e;
    e.r_last = p.r * p.VT * (kTwoPi + 1.0) / vs;
    e.t_last_circle = kTwoPi * p.r / vs;
    e.t_linear_descent = p.r / vs;
    e.t_right = e.r_last / (vs - p.VT);
    e.t_left = 2.0 * vs * e.r_last / ((vs - p.VT) * (vs - p.VT));
    e.t_one = e.t_right + e.t_left;
    e.feasible = (p.r - e.r_last) / p.VT > e.t_one;
    return e;
}

/// Closed-form lower bound on deltaV that guarantees a feasible end game.
inline double delta_v_threshold(double alpha_ratio, double VT) {
    return VT * (-kTwoPi * alpha_ratio + kPi + 1.0 + std::sqrt(kPi * kPi + 6.0 * kPi + 7.0));
}

/// Exact boundary of the end-game inequality. With u = vs/VT and q = 2*pi + 1
/// the inequality reduces to u^2 - (2 + q) u + (1 - q) > 0.
inline double delta_v_threshold_exact(double alpha_ratio, double VT) {
    const double q = kTwoPi + 1.0;
    const double u = 0.5 * ((2.0 + q) + std::sqrt(q * q + 8.0 * q));
    return VT * (u - 1.0 - kTwoPi * alpha_ratio);
}

inline double planner_speed(const SearchParams& p) { return v_critical_taylor(p) + p.deltaV; }

/// Full schedule for vs = v_critical_taylor + deltaV. Throws InfeasibleError
/// when the end game cannot finish.
inline SweepPlan build_plan(const SearchParams& params) {
    const SearchParams p = validate(params);
    if (!(p.deltaV > 0.0)) throw DomainError("deltaV", "must be positive to build a plan");
    SweepPlan plan;
    plan.params = p;
    plan.vs = planner_speed(p);
    const double vs = plan.vs;
    const int n = num_iterations(vs, p);
    plan.n_iterations = n;

    double rec_radius = p.R0;
    double rec_in = 0.0;
    double rec_circ = 0.0;
    for (int i = 0; i < n; ++i) {
        CycleRecord c;
        c.index = i;
        c.radius = radius_at(i, vs, p);
        c.t_sweep = kTwoPi * c.radius / vs;
        const Advance a = advance_distance(i, c.radius, vs, p);
        c.delta_eff = a.delta_eff;
        c.t_in = i + 1 < n ? a.t_in : radius_at(n, vs, p) / vs;
        plan.cycles.push_back(c);

        rec_circ += kTwoPi * rec_radius / vs;
        const Advance ra = advance_distance(i, rec_radius, vs, p);
        rec_radius -= ra.delta_eff;
        rec_in += i + 1 < n ? ra.t_in : rec_radius / vs;
    }
    if (n == 0) rec_in = p.R0 / vs;
    plan.t_in_recursive = rec_in;
    plan.t_circular_recursive = rec_circ + kTwoPi * p.r / vs;

    const AggregateTimes agg = aggregate_times(vs, p);
    plan.t_in_total = agg.t_in_total;
    plan.t_circular_total = agg.t_circular_total;
    plan.end_game = end_game(vs, p);
    if (!plan.end_game.feasible) {
        throw InfeasibleError(p.deltaV, delta_v_threshold(alpha(p), p.VT),
                              delta_v_threshold_exact(alpha(p), p.VT));
    }
    plan.t_total = plan.t_circular_total + plan.t_in_total + plan.end_game.t_one;
    return plan;
}

}  // namespace sweep
