#pragma once

// Acceptance checks at the reference instance R0=100, r=10, VT=1.
// Shared by `sweep verify` and the acceptance test binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sweep/sweep.hpp"

namespace verify {

struct Check {
    int id = 0;
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    bool quick = false;
    std::uint64_t seed = 7;
};

inline const sweep::SearchParams kReference{100.0, 10.0, 1.0, 1.0};

namespace detail {

class Report {
public:
    void expect(bool ok, const std::string& what) {
        ok_ = ok_ && ok;
        if (!first_) out_ << "; ";
        first_ = false;
        out_ << what << (ok ? "" : " [FAIL]");
    }

    void near(const std::string& label, double got, double want, double tol) {
        std::ostringstream s;
        s.precision(10);
        s << label << "=" << got << " (want " << want << " +/- " << tol << ")";
        expect(std::abs(got - want) <= tol, s.str());
    }

    void note(const std::string& what) { expect(true, what); }

    bool ok() const { return ok_; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    bool ok_ = true;
    bool first_ = true;
};

inline std::string fmt(double v, int digits = 10) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

inline bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Step-by-step recurrence R_{i+1} = R_i - delta_eff(R_i) with per-step times.
struct Iterated {
    int n = 0;
    std::vector<double> radii;
    double t_in = 0.0;
    double t_circ = 0.0;
};

inline Iterated iterate(double vs, const sweep::SearchParams& p) {
    Iterated it;
    double R = p.R0;
    it.radii.push_back(R);
    while (R > p.r + sweep::kStopSlack && it.n < 100000) {
        const double delta = (p.r * (vs - p.VT) - sweep::kTwoPi * R * p.VT) / vs;
        const double eff = delta * vs / (vs + p.VT);
        it.t_circ += sweep::kTwoPi * R / vs;
        it.t_in += eff / vs;
        R -= eff;
        it.radii.push_back(R);
        ++it.n;
    }
    // The last advance is replaced by the descent from R_N to the centre.
    if (it.n > 0) it.t_in -= (it.radii[it.n - 1] - R) / vs;
    it.t_in += R / vs;
    it.t_circ += sweep::kTwoPi * p.r / vs;
    return it;
}

}  // namespace detail

inline Check critical_velocities_check() {
    using namespace sweep;
    detail::Report r;
    const SearchParams& p = kReference;
    r.near("v_one_cycle", v_one_cycle(p), 62.83185307, 1e-7);
    r.near("v_c_arc", v_critical_arc(p), 63.8335, 1e-3);
    r.near("v_c_taylor", v_critical_taylor(p), 63.8319, 1e-3);
    r.near("v_s2", v_s2(p), 62.84631837, 1e-7);
    r.near("v_c_taylor-v_s2", v_critical_taylor(p) - v_s2(p), 0.9855, 1e-3);
    return {1, "critical velocities", r.ok(), false, r.str()};
}

inline Check minimizer_check() {
    using namespace sweep;
    detail::Report r;
    const EnvelopeGap g = t_star_exact(v_one_cycle(kReference), kReference);
    r.near("t_star", g.t_star, 0.0012, 1e-4);
    r.near("f_min", g.f_min, -1.047e-6, 5e-8);
    r.note("f(t_star closed form)=" + detail::fmt(g.f_at_t_star) + " at t_min=" + detail::fmt(g.t_min));
    return {2, "minimizer and gap", r.ok(), false, r.str()};
}

inline Check plan_totals_check() {
    using namespace sweep;
    detail::Report r;
    const SweepPlan plan = build_plan(kReference);
    r.near("t_total", plan.t_total, 349.3854, 1e-3);
    r.near("R_last", plan.end_game.r_last, 1.1234, 1e-3);
    r.near("t_right", plan.end_game.t_right, 0.0176, 1e-3);
    r.near("t_left", plan.end_game.t_left, 0.0358, 1e-3);
    r.near("T_one", plan.end_game.t_one, 0.0533, 1e-3);
    return {3, "plan totals", r.ok(), false, r.str()};
}

inline Check recursion_check(std::uint64_t seed) {
    using namespace sweep;
    detail::Report r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int draws = 0;
    int rejected = 0;
    int bad_n = 0;
    int bad_radius = 0;
    int bad_times = 0;
    double worst = 0.0;
    while (draws < 500) {
        const double a = 1.5 + (200.0 - 1.5) * u01(rng);
        const double VT = 0.1 + (10.0 - 0.1) * u01(rng);
        const double dv = VT * (0.1 + (10.0 - 0.1) * u01(rng));
        const double rr = 1.0 + 99.0 * u01(rng);
        if (!(dv > delta_v_threshold(a, VT))) {
            ++rejected;
            continue;
        }
        ++draws;
        const SearchParams p{a * rr, rr, VT, dv};
        const double vs = planner_speed(p);
        const detail::Iterated it = detail::iterate(vs, p);
        const int n = num_iterations(vs, p);
        if (n != it.n) ++bad_n;
        bool radius_ok = true;
        for (int i = 0; i <= std::min(n, it.n); ++i) {
            const double closed = radius_at(i, vs, p);
            const double e = std::abs(closed - it.radii[i]) / std::max(std::abs(closed), std::abs(it.radii[i]));
            worst = std::max(worst, e);
            if (e > 1e-6) radius_ok = false;
        }
        if (!radius_ok) ++bad_radius;
        const AggregateTimes agg = aggregate_times(vs, p);
        if (!detail::rel_close(agg.t_in_total, it.t_in, 1e-6) || !detail::rel_close(agg.t_circular_total, it.t_circ, 1e-6))
            ++bad_times;
    }
    r.expect(bad_n == 0, "num_iterations mismatches=" + std::to_string(bad_n));
    r.expect(bad_radius == 0, "radius_at mismatches=" + std::to_string(bad_radius));
    r.expect(bad_times == 0, "aggregate_times mismatches=" + std::to_string(bad_times));
    r.note("draws=500 rejected_below_threshold=" + std::to_string(rejected) + " worst_radius_rel=" + detail::fmt(worst, 3) +
           " seed=" + std::to_string(seed));
    return {4, "closed form vs recursion", r.ok(), false, r.str()};
}

inline Check bisection_check() {
    using namespace sweep;
    detail::Report r;
    const SearchParams& p = kReference;
    const double eps = 1e-9;
    const double v = bisect_critical(v_one_cycle(p), v_critical_arc(p), eps, p);
    const double g = critical_gap(v, p);
    r.expect(std::abs(g) <= eps, "v=" + detail::fmt(v, 12) + " |g(v)|=" + detail::fmt(std::abs(g), 3));
    const int n = 100000;
    const double w = gap_window(v, p);
    double lowest = envelope_gap(0.0, v, p);
    for (int i = 0; i <= n; ++i) lowest = std::min(lowest, envelope_gap(w * i / n, v, p));
    r.expect(lowest >= -eps, "min_sampled_f=" + detail::fmt(lowest, 3));
    r.note("f(t_star closed form, v)=" + detail::fmt(t_star_exact(v, p).f_at_t_star, 3));
    return {5, "bisection certificate", r.ok(), false, r.str()};
}

inline Check confinement_check() {
    using namespace sweep;
    detail::Report r;
    const SearchParams& p = kReference;
    const double arc = check_confinement(v_critical_arc(p), p);
    const double s2 = check_confinement(v_s2(p), p);
    const double one = check_confinement(v_one_cycle(p), p);
    const double lb = check_confinement(v_lower_bound(p), p);
    r.expect(arc >= 0.0, "v_c_arc gap=" + detail::fmt(arc, 4));
    r.expect(s2 >= 0.0, "v_s2 gap=" + detail::fmt(s2, 4));
    r.expect(one < 0.0, "v_one_cycle gap=" + detail::fmt(one, 4));
    r.expect(lb < 0.0, "v_lb gap=" + detail::fmt(lb, 4));
    return {6, "oracle confinement", r.ok(), false, r.str()};
}

inline Check simulation_check(bool quick) {
    using namespace sweep;
    if (quick) return {7, "full simulation", true, true, "skipped (--quick)"};
    detail::Report r;
    const SweepPlan plan = build_plan(kReference);
    const double h = kReference.r / 40.0;
    const SimulationResult res = simulate(plan, h);
    r.expect(!res.escaped, std::string("escaped=") + (res.escaped ? "true" : "false"));
    const double tol = res.h + kReference.VT * res.dt;
    int over = 0;
    int first_over = -1;
    for (size_t i = 0; i < res.per_cycle_radii.size() && i < plan.cycles.size(); ++i) {
        if (res.per_cycle_radii[i] - plan.cycles[i].radius > tol) {
            ++over;
            if (first_over < 0) first_over = static_cast<int>(i);
        }
    }
    r.expect(res.per_cycle_radii.size() == plan.cycles.size() && over == 0,
             "cycles_above_R_i_plus_" + detail::fmt(tol, 4) + "=" + std::to_string(over) + "/" +
                 std::to_string(plan.cycles.size()) + " first=" + std::to_string(first_over) +
                 " max_overshoot=" + detail::fmt(res.max_overshoot, 4));
    const double want = 349.3854;
    if (res.clean_time) {
        r.expect(std::abs(*res.clean_time - want) <= 0.02 * want, "clean_time=" + detail::fmt(*res.clean_time, 8));
    } else {
        r.expect(false, "clean_time=none");
    }
    return {7, "full simulation", r.ok(), false, r.str()};
}

inline Check monotonicity_check() {
    using namespace sweep;
    detail::Report r;
    const SearchParams& base = kReference;

    int n_prev = -1;
    double t_prev = 0.0;
    bool dv_ok = true;
    for (int k = 1; k <= 100; ++k) {
        SearchParams p = base;
        p.deltaV = 0.1 * k * base.VT;
        const double vs = planner_speed(p);
        const int n = num_iterations(vs, p);
        const AggregateTimes a = aggregate_times(vs, p);
        const double t = a.t_in_total + a.t_circular_total + end_game(vs, p).t_one;
        if (n_prev >= 0 && (n > n_prev || t > t_prev)) dv_ok = false;
        n_prev = n;
        t_prev = t;
    }
    r.expect(dv_ok, "deltaV 0.1..10: N and t_total nonincreasing");

    n_prev = -1;
    bool a_ok = true;
    for (int k = 2; k <= 100; ++k) {
        SearchParams p = base;
        p.R0 = k * base.r;
        const double vs = planner_speed(p);
        const int n = num_iterations(vs, p);
        const AggregateTimes a = aggregate_times(vs, p);
        const double t = a.t_in_total + a.t_circular_total + end_game(vs, p).t_one;
        if (n_prev >= 0 && (n < n_prev || t < t_prev)) a_ok = false;
        n_prev = n;
        t_prev = t;
    }
    r.expect(a_ok, "alpha 2..100: N and t_total nondecreasing");

    const SweepPlan plan = build_plan(base);
    const double ratio = plan.t_circular_total / plan.t_in_total;
    r.expect(ratio > 10.0, "circular/inward=" + detail::fmt(ratio, 5));
    return {8, "study monotonicity", r.ok(), false, r.str()};
}

inline Check threshold_check() {
    using namespace sweep;
    detail::Report r;
    r.near("threshold(alpha=10)", delta_v_threshold(10.0, 1.0), -52.71, 1e-2);
    r.near("threshold(alpha=1)", delta_v_threshold(1.0, 1.0), 3.835, 1e-2);
    const double alphas[] = {1.0, 1.1, 1.25, 1.5, 2.0, 5.0, 10.0, 25.0, 100.0};
    int points = 0;
    int mismatches = 0;
    std::string first;
    for (double a : alphas) {
        const double thr = delta_v_threshold(a, 1.0);
        for (int k = 1; k <= 100; ++k) {
            const double dv = 0.1 * k;
            if (std::abs(dv - thr) <= 1e-2) continue;
            ++points;
            const SearchParams p{a * 10.0, 10.0, 1.0, dv};
            const bool feasible = end_game(planner_speed(p), p).feasible;
            if (feasible != (dv > thr)) {
                ++mismatches;
                if (first.empty()) first = " first=(alpha " + detail::fmt(a, 4) + ", dV " + detail::fmt(dv, 4) + ")";
            }
        }
    }
    r.expect(mismatches == 0, "grid mismatches=" + std::to_string(mismatches) + "/" + std::to_string(points) + first);
    r.note("exact boundary at alpha=1: " + detail::fmt(delta_v_threshold_exact(1.0, 1.0), 6));
    return {9, "threshold law", r.ok(), false, r.str()};
}

template <class F>
Check timed(int id, const char* name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
        c = f();
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.id = id;
    c.name = name;
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

inline std::vector<Check> run_all(const Options& opt) {
    std::vector<Check> out;
    out.push_back(timed(1, "critical velocities", [] { return critical_velocities_check(); }));
    out.push_back(timed(2, "minimizer and gap", [] { return minimizer_check(); }));
    out.push_back(timed(3, "plan totals", [] { return plan_totals_check(); }));
    out.push_back(timed(4, "closed form vs recursion", [&] { return recursion_check(opt.seed); }));
    out.push_back(timed(5, "bisection certificate", [] { return bisection_check(); }));
    out.push_back(timed(6, "oracle confinement", [] { return confinement_check(); }));
    out.push_back(timed(7, "full simulation", [&] { return simulation_check(opt.quick); }));
    out.push_back(timed(8, "study monotonicity", [] { return monotonicity_check(); }));
    out.push_back(timed(9, "threshold law", [] { return threshold_check(); }));
    return out;
}

inline bool all_passed(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

/// One line per criterion. Timings are left out so repeated runs print the same text.
inline std::string format_line(const Check& c) {
    const char* status = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    return "criterion " + std::to_string(c.id) + " [" + status + "] " + c.name + ": " + c.detail;
}

inline nlohmann::json to_json(const std::vector<Check>& checks, const Options& opt) {
    nlohmann::json j;
    j["seed"] = opt.seed;
    j["quick"] = opt.quick;
    j["passed"] = all_passed(checks);
    j["checks"] = nlohmann::json::array();
    for (const Check& c : checks) {
        j["checks"].push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"skipped", c.skipped},
                               {"detail", c.detail}});
    }
    return j;
}

}  // namespace verify
