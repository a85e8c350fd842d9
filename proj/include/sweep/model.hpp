#pragma once

#include <cmath>
#include <vector>

#include "sweep/errors.hpp"

namespace sweep {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// One search instance: initial region radius, sensor half-length,
/// evader speed and the speed increment above the Taylor critical velocity.
struct SearchParams {
    double R0 = 0.0;
    double r = 0.0;
    double VT = 0.0;
    double deltaV = 0.0;

    friend bool operator==(const SearchParams&, const SearchParams&) = default;
};

/// Returns `p` unchanged when every invariant holds, otherwise throws
/// DomainError naming the first violated field.
inline SearchParams validate(const SearchParams& p) {
    if (!(p.R0 > 0.0) || !std::isfinite(p.R0)) throw DomainError("R0", "must be positive and finite");
    if (!(p.r > 0.0) || !std::isfinite(p.r)) throw DomainError("r", "must be positive and finite");
    if (!(p.VT > 0.0) || !std::isfinite(p.VT)) throw DomainError("VT", "must be positive and finite");
    if (!(p.deltaV >= 0.0) || !std::isfinite(p.deltaV))
        throw DomainError("deltaV", "must be nonnegative and finite");
    if (p.R0 < p.r) throw DomainError("R0", "R0 < r (initial region must be at least the sensor half-length)");
    return p;
}

inline double alpha(const SearchParams& p) { return p.R0 / p.r; }

struct CycleRecord {
    int index = 0;
    double radius = 0.0;     // R_i, sensor midpoint during the sweep
    double t_sweep = 0.0;    // 2*pi*R_i / vs
    double delta_eff = 0.0;  // inward advance after the sweep
    double t_in = 0.0;       // time spent moving inward after the sweep

    friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

struct EndGameRecord {
    double r_last = 0.0;
    double t_last_circle = 0.0;
    double t_linear_descent = 0.0;
    double t_right = 0.0;
    double t_left = 0.0;
    double t_one = 0.0;
    bool feasible = false;

    friend bool operator==(const EndGameRecord&, const EndGameRecord&) = default;
};

/// Complete cleaning schedule. Aggregates come from the closed forms; the
/// `*_recursive` fields hold the same totals summed cycle by cycle.
struct SweepPlan {
    SearchParams params;
    double vs = 0.0;
    int n_iterations = 0;
    std::vector<CycleRecord> cycles;
    double t_in_total = 0.0;
    double t_circular_total = 0.0;
    EndGameRecord end_game;
    double t_total = 0.0;
    double t_in_recursive = 0.0;
    double t_circular_recursive = 0.0;

    friend bool operator==(const SweepPlan&, const SweepPlan&) = default;
};

}  // namespace sweep
