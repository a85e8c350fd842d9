#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "sweep/errors.hpp"
#include "sweep/geometry.hpp"
#include "sweep/model.hpp"
#include "sweep/serialization.hpp"
#include "sweep/timeline.hpp"
#include "sweep/velocity.hpp"
#include "sweep/wavefront.hpp"

namespace sweep {

/// Minimum over sampled t of chi^2 - (VT (2 pi R0/vs + t))^2, where chi is the
/// distance from the outer sensor tip to the worst point P = (0, R0), computed
/// from explicit positions. Nonnegative certifies that P's wavefront stays
/// behind the tip.
inline double check_confinement(double vs, const SearchParams& p, int n_samples = 100000) {
    if (n_samples < 1000) throw DomainError("n_samples", "must be at least 1000");
    const double w = gap_window(vs, p);
    const Vec2 P{0.0, p.R0};
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_samples; ++j) {
        const double t = w * j / (n_samples - 1);
        const Vec2 tip = (p.R0 + p.r) * unit_at(kStartAngle + vs * t / p.R0);
        const Vec2 d = tip - P;
        const double front = p.VT * (kTwoPi * p.R0 / vs + t);
        best = std::min(best, dot(d, d) - front * front);
    }
    return best;
}

/// Grid argmin of the envelope gap refined by golden-section search.
inline double brute_force_t_star(double vs, const SearchParams& p, int n_samples = 100000) {
    if (n_samples < 100000) throw DomainError("n_samples", "must be at least 1e5");
    const double w = gap_window(vs, p);
    int best = 0;
    double fbest = envelope_gap(0.0, vs, p);
    for (int j = 1; j < n_samples; ++j) {
        const double f = envelope_gap(w * j / (n_samples - 1), vs, p);
        if (f < fbest) {
            fbest = f;
            best = j;
        }
    }
    double a = w * std::max(best - 1, 0) / (n_samples - 1);
    double b = w * std::min(best + 1, n_samples - 1) / (n_samples - 1);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = envelope_gap(x1, vs, p);
    double f2 = envelope_gap(x2, vs, p);
    while (b - a > 1e-9) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = envelope_gap(x1, vs, p);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = envelope_gap(x2, vs, p);
        }
    }
    return 0.5 * (a + b);
}

struct Snapshot {
    double t = 0.0;
    long occupied = 0;
    double bounding_radius = 0.0;
    SensorPose pose;
};

struct SimulationOptions {
    bool stop_on_escape = true;
    int snapshot_stride = 0;   // steps between snapshots; 0 disables them
    double hold_time = -1.0;   // run-on after the schedule; negative picks 2% of t_total
};

struct SimulationResult {
    bool escaped = false;
    std::optional<double> escape_time;
    std::vector<double> per_cycle_radii;  // bounding radius at the start of each shrinking sweep
    std::optional<double> clean_time;
    double max_overshoot = 0.0;           // max(0, per-cycle radius - planner R_i)
    double h = 0.0;
    double dt = 0.0;
    long steps = 0;
    std::vector<Snapshot> snapshots;
};

/// Same schedule geometry driven at another speed; every leg's duration
/// scales by old_vs / vs.
inline SweepPlan with_forced_speed(const SweepPlan& plan, double vs) {
    SweepPlan out = plan;
    const double s = plan.vs / vs;
    out.vs = vs;
    for (CycleRecord& c : out.cycles) {
        c.t_sweep *= s;
        c.t_in *= s;
    }
    out.t_in_total *= s;
    out.t_circular_total *= s;
    EndGameRecord& e = out.end_game;
    e.t_last_circle *= s;
    e.t_linear_descent *= s;
    e.t_right *= s;
    e.t_left *= s;
    e.t_one = e.t_right + e.t_left;
    out.t_total = out.t_circular_total + out.t_in_total + e.t_one;
    return out;
}

namespace detail {

/// Largest outer reach among interior-lineage cells.
inline double front_radius(const Wavefront& wf, double t) {
    double best = 0.0;
    const int cells = wf.size() * wf.size();
    for (int k = 0; k < cells; ++k) {
        if (!wf.occupied_at(k) || wf.lineage_at(k) != Lineage::interior) continue;
        best = std::max(best, wf.reach(k, t));
    }
    return best;
}

inline double bounding_radius(const Wavefront& wf) {
    double best = 0.0;
    const int cells = wf.size() * wf.size();
    for (int k = 0; k < cells; ++k)
        if (wf.occupied_at(k)) best = std::max(best, norm(wf.center(k)));
    return best;
}

}  // namespace detail

/// Discrete-time wavefront run of `plan`. Defaults: h = r/40, dt = h/(2 vs).
inline SimulationResult simulate(const SweepPlan& plan, double h = 0.0, double dt = 0.0,
                                 const SimulationOptions& opt = {}) {
    const SearchParams& p = plan.params;
    const double vs = plan.vs;
    if (h <= 0.0) h = p.r / 40.0;
    if (dt <= 0.0) dt = h / (2.0 * vs);
    if (h > p.r / 20.0 * (1.0 + 1e-12)) throw ConfigError("h must not exceed r/20");
    if (dt * vs > h * (1.0 + 1e-12)) throw ConfigError("dt * vs must not exceed h");
    if (dt * p.VT > 0.5 * h * (1.0 + 1e-12)) throw ConfigError("dt * VT must not exceed h/2");

    SimulationResult res;
    res.h = h;
    res.dt = dt;
    const std::vector<Phase> phases = build_timeline(plan);
    const double t_end = phases.back().t1;
    const double hold = opt.hold_time >= 0.0 ? opt.hold_time : 0.02 * plan.t_total;
    const double escape_r2 = (p.R0 + p.r) * (p.R0 + p.r);

    Wavefront wf(p.R0 + 2.0 * p.r, h, p.VT);
    wf.set_interior_bound(p.R0);
    wf.seed_disk(p.R0, pose_in(phases.front(), 0.0).segment);
    if (plan.n_iterations > 0) res.per_cycle_radii.push_back(detail::front_radius(wf, 0.0));

    double t = 0.0;
    size_t k = 0;
    Segment parked = pose_in(phases.back(), t_end).segment;
    while (true) {
        while (k < phases.size() && t >= phases[k].t1) ++k;
        double t_next = t + dt;
        SensorPose next;
        std::optional<SweptRegion> region;
        if (k < phases.size()) {
            const Phase& ph = phases[k];
            if (ph.mode == SensorMode::circular && t == ph.t0) wf.set_interior_bound(0.5 * (ph.inner + ph.outer));
            if (t_next > ph.t1 || ph.t1 - t_next < 1e-9 * dt) t_next = ph.t1;
            const SensorPose now = pose_in(ph, t);
            next = pose_in(ph, t_next);
            if (ph.mode == SensorMode::circular)
                region = SweptRegion::annular(ph.inner, ph.outer, now.angle, next.angle);
            else
                region = SweptRegion::quad(now.segment, next.segment);
        } else {
            next = pose_in(phases.back(), t_end);
            next.segment = parked;
        }
        wf.grow_until(t_next, next.segment, [&](int idx) {
            const Vec2 c = wf.center(idx);
            if (!res.escaped && dot(c, c) > escape_r2) {
                res.escaped = true;
                res.escape_time = t_next;
            }
        });
        if (region) wf.clean(*region, t_next, next.segment);
        t = t_next;
        ++res.steps;

        if (opt.snapshot_stride > 0 && res.steps % opt.snapshot_stride == 0)
            res.snapshots.push_back({t, wf.occupied_count(), detail::bounding_radius(wf), next});
        if (res.escaped && opt.stop_on_escape) break;
        if (wf.occupied_count() == 0) {
            res.clean_time = t;
            break;
        }
        if (t >= t_end + hold) break;
        if (k < phases.size() && t >= phases[k].t1 && k + 1 < phases.size()) {
            const Phase& nxt = phases[k + 1];
            if (nxt.mode == SensorMode::circular && nxt.cycle > 0 && nxt.cycle < plan.n_iterations)
                res.per_cycle_radii.push_back(detail::front_radius(wf, t));
        }
    }
    for (size_t i = 0; i < res.per_cycle_radii.size() && i < plan.cycles.size(); ++i)
        res.max_overshoot = std::max(res.max_overshoot, res.per_cycle_radii[i] - plan.cycles[i].radius);
    return res;
}

/// Escape time of a single evader moving straight at speed VT against
/// repeated circular sweeps at midpoint R0; nullopt if the sensor catches it
/// or it is still confined at t_max.
inline std::optional<double> point_evader_escape_time(const SearchParams& p, double vs, Vec2 start,
                                                      Vec2 heading, double t_max, double dt) {
    const double omega = vs / p.R0;
    const double lo = p.R0 - p.r;
    const double hi = p.R0 + p.r;
    const Vec2 vel = (p.VT / norm(heading)) * heading;
    Vec2 pos = start;
    for (double t = 0.0; t < t_max; t += dt) {
        const Vec2 u0 = unit_at(kStartAngle + omega * t);
        const Vec2 u1 = unit_at(kStartAngle + omega * (t + dt));
        const Vec2 nxt = pos + dt * vel;
        const double rr = norm(nxt);
        // Caught if the sensor line passes over the evader during the step.
        const double before = cross(u0, pos);
        const double after = cross(u1, nxt);
        if (rr >= lo && rr <= hi && dot(nxt, u1) > 0.0 && before >= 0.0 && after <= 0.0) return std::nullopt;
        pos = nxt;
        if (norm(pos) > hi) return t + dt;
    }
    return std::nullopt;
}

/// Fastest escape among evaders leaving P (just behind the sensor) in the
/// sector between straight outward and straight against the sweep direction.
inline std::optional<double> worst_point_escape_time(const SearchParams& p, double vs, double t_max,
                                                     double dt, int headings = 16) {
    const double behind = kStartAngle - 1e-6;
    const Vec2 start = p.R0 * unit_at(behind);
    std::optional<double> best;
    for (int k = 0; k < headings; ++k) {
        const double dev = -0.5 * kPi * k / (headings - 1);
        const auto e = point_evader_escape_time(p, vs, start, unit_at(behind + dev), t_max, dt);
        if (e && (!best || *e < *best)) best = e;
    }
    return best;
}

inline void write_snapshots_csv(std::ostream& os, const SimulationResult& res) {
    os << "t,occupied,bounding_radius,mode,angle,ax,ay,bx,by\n";
    for (const Snapshot& s : res.snapshots) {
        const Segment& g = s.pose.segment;
        os << csv_number(s.t) << ',' << s.occupied << ',' << csv_number(s.bounding_radius) << ','
           << to_string(s.pose.mode) << ',' << csv_number(s.pose.angle) << ',' << csv_number(g.a.x) << ','
           << csv_number(g.a.y) << ',' << csv_number(g.b.x) << ',' << csv_number(g.b.y) << '\n';
    }
}

inline nlohmann::json summary_json(const SweepPlan& plan, const SimulationResult& res) {
    nlohmann::json j;
    j["params"] = plan.params;
    j["vs"] = plan.vs;
    j["h"] = res.h;
    j["dt"] = res.dt;
    j["steps"] = res.steps;
    j["escaped"] = res.escaped;
    j["escape_time"] = res.escape_time ? nlohmann::json(*res.escape_time) : nlohmann::json(nullptr);
    j["clean_time"] = res.clean_time ? nlohmann::json(*res.clean_time) : nlohmann::json(nullptr);
    j["planned_t_total"] = plan.t_total;
    j["max_overshoot"] = res.max_overshoot;
    j["per_cycle_radii"] = res.per_cycle_radii;
    std::vector<double> planned;
    for (const CycleRecord& c : plan.cycles) planned.push_back(c.radius);
    j["planned_radii"] = planned;
    return j;
}

}  // namespace sweep
