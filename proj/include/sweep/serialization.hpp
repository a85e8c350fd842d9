#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "sweep/model.hpp"

namespace sweep {

using nlohmann::json;

inline void to_json(json& j, const SearchParams& p) {
    j = json{{"R0", p.R0}, {"r", p.r}, {"VT", p.VT}, {"deltaV", p.deltaV}};
}

inline void from_json(const json& j, SearchParams& p) {
    j.at("R0").get_to(p.R0);
    j.at("r").get_to(p.r);
    j.at("VT").get_to(p.VT);
    j.at("deltaV").get_to(p.deltaV);
}

inline void to_json(json& j, const CycleRecord& c) {
    j = json{{"index", c.index}, {"radius", c.radius}, {"t_sweep", c.t_sweep},
             {"delta_eff", c.delta_eff}, {"t_in", c.t_in}};
}

inline void from_json(const json& j, CycleRecord& c) {
    j.at("index").get_to(c.index);
    j.at("radius").get_to(c.radius);
    j.at("t_sweep").get_to(c.t_sweep);
    j.at("delta_eff").get_to(c.delta_eff);
    j.at("t_in").get_to(c.t_in);
}

inline void to_json(json& j, const EndGameRecord& e) {
    j = json{{"r_last", e.r_last},
             {"t_last_circle", e.t_last_circle},
             {"t_linear_descent", e.t_linear_descent},
             {"t_right", e.t_right},
             {"t_left", e.t_left},
             {"t_one", e.t_one},
             {"feasible", e.feasible}};
}

inline void from_json(const json& j, EndGameRecord& e) {
    j.at("r_last").get_to(e.r_last);
    j.at("t_last_circle").get_to(e.t_last_circle);
    j.at("t_linear_descent").get_to(e.t_linear_descent);
    j.at("t_right").get_to(e.t_right);
    j.at("t_left").get_to(e.t_left);
    j.at("t_one").get_to(e.t_one);
    j.at("feasible").get_to(e.feasible);
}

inline void to_json(json& j, const SweepPlan& s) {
    j = json{{"params", s.params},
             {"vs", s.vs},
             {"n_iterations", s.n_iterations},
             {"cycles", s.cycles},
             {"t_in_total", s.t_in_total},
             {"t_circular_total", s.t_circular_total},
             {"end_game", s.end_game},
             {"t_total", s.t_total},
             {"t_in_recursive", s.t_in_recursive},
             {"t_circular_recursive", s.t_circular_recursive}};
}

inline void from_json(const json& j, SweepPlan& s) {
    j.at("params").get_to(s.params);
    j.at("vs").get_to(s.vs);
    j.at("n_iterations").get_to(s.n_iterations);
    j.at("cycles").get_to(s.cycles);
    j.at("t_in_total").get_to(s.t_in_total);
    j.at("t_circular_total").get_to(s.t_circular_total);
    j.at("end_game").get_to(s.end_game);
    j.at("t_total").get_to(s.t_total);
    s.t_in_recursive = j.value("t_in_recursive", s.t_in_total);
    s.t_circular_recursive = j.value("t_circular_recursive", s.t_circular_total);
}

/// Ten significant digits, the CSV number format.
inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_plan_csv(std::ostream& os, const SweepPlan& plan) {
    os << "i,R_i,t_sweep,delta_eff,t_in_i\n";
    for (const CycleRecord& c : plan.cycles) {
        os << c.index << ',' << csv_number(c.radius) << ',' << csv_number(c.t_sweep) << ','
           << csv_number(c.delta_eff) << ',' << csv_number(c.t_in) << '\n';
    }
}

}  // namespace sweep
