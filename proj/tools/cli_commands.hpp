#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sweep/sweep.hpp"
#include "verify.hpp"

namespace cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kInfeasible = 3 };

/// Environment variable naming a directory that relative --output paths resolve against.
inline constexpr const char* kOutputDirEnv = "SWEEP_OUTPUT_DIR";

struct RunConfig {
    std::string command;
    sweep::SearchParams params{100.0, 10.0, 1.0, 1.0};
    std::optional<double> from;
    std::optional<double> to;
    std::optional<double> step;
    std::string output;
    std::string format;
    double h = 0.0;
    double dt = 0.0;
    int n_samples = 100000;
    double eps = 1e-9;
    std::optional<double> forced_vs;
    std::string snapshots;
    int snapshot_stride = 0;
    bool quick = false;
    std::uint64_t seed = 7;
};

inline std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
    }
    return p;
}

/// Writes `text` to --output when given, otherwise to `out`.
inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    const std::filesystem::path p = resolve_output(cfg.output);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw sweep::ConfigError("cannot open output file " + p.string());
    f << text;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline int cmd_critical(const RunConfig& cfg, std::ostream& out) {
    using namespace sweep;
    const SearchParams p = validate(cfg.params);
    const CriticalVelocitySet c = critical_velocities(p, cfg.eps);
    const std::pair<const char*, double> rows[] = {{"v_lb", c.v_lb},         {"v_one_cycle", c.v_one_cycle},
                                                   {"v_c_arc", c.v_c_arc},   {"v_c_taylor", c.v_c_taylor},
                                                   {"v_s2", c.v_s2},         {"v_bisection", c.v_bisection}};
    if (cfg.format == "csv") {
        std::ostringstream s;
        s << "name,value,t_star,f_at_t_star,t_min,f_min,clamped\n";
        for (const auto& [name, v] : rows) {
            const EnvelopeGap g = t_star_exact(v, p);
            s << name << ',' << csv_number(v) << ',' << csv_number(g.t_star) << ',' << csv_number(g.f_at_t_star)
              << ',' << csv_number(g.t_min) << ',' << csv_number(g.f_min) << ',' << (g.clamped ? 1 : 0) << '\n';
        }
        emit(cfg, s.str(), out);
        return kOk;
    }
    nlohmann::json j;
    j["params"] = p;
    j["epsilon"] = c.epsilon;
    j["velocities"] = nlohmann::json::array();
    for (const auto& [name, v] : rows) {
        const EnvelopeGap g = t_star_exact(v, p);
        j["velocities"].push_back({{"name", name},
                                   {"value", v},
                                   {"t_star", g.t_star},
                                   {"f_at_t_star", g.f_at_t_star},
                                   {"t_min", g.t_min},
                                   {"f_min", g.f_min},
                                   {"clamped", g.clamped}});
    }
    emit(cfg, dump(j), out);
    return kOk;
}

inline int cmd_plan(const RunConfig& cfg, std::ostream& out) {
    using namespace sweep;
    const SweepPlan plan = build_plan(cfg.params);
    if (cfg.format == "csv") {
        std::ostringstream s;
        write_plan_csv(s, plan);
        emit(cfg, s.str(), out);
        return kOk;
    }
    nlohmann::json j;
    j["summary"] = {{"n_iterations", plan.n_iterations},
                    {"t_in_total", plan.t_in_total},
                    {"t_circular_total", plan.t_circular_total},
                    {"t_one", plan.end_game.t_one},
                    {"t_total", plan.t_total},
                    {"feasible", plan.end_game.feasible}};
    j["plan"] = plan;
    emit(cfg, dump(j), out);
    return kOk;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    using namespace sweep;
    SweepPlan plan = build_plan(cfg.params);
    if (cfg.forced_vs) plan = with_forced_speed(plan, *cfg.forced_vs);
    SimulationOptions opt;
    opt.snapshot_stride = cfg.snapshot_stride;
    if (!cfg.snapshots.empty() && opt.snapshot_stride == 0) opt.snapshot_stride = 100;
    const SimulationResult res = simulate(plan, cfg.h, cfg.dt, opt);
    if (!cfg.snapshots.empty()) {
        const std::filesystem::path p = resolve_output(cfg.snapshots);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ConfigError("cannot open snapshot file " + p.string());
        write_snapshots_csv(f, res);
    }
    if (cfg.format == "csv") {
        std::ostringstream s;
        s << "i,planned_R_i,simulated_R_i\n";
        for (size_t i = 0; i < res.per_cycle_radii.size() && i < plan.cycles.size(); ++i)
            s << i << ',' << csv_number(plan.cycles[i].radius) << ',' << csv_number(res.per_cycle_radii[i]) << '\n';
        emit(cfg, s.str(), out);
        return kOk;
    }
    nlohmann::json j = summary_json(plan, res);
    j["confinement_gap"] = check_confinement(plan.vs, plan.params, cfg.n_samples);
    emit(cfg, dump(j), out);
    return kOk;
}

struct StudyRow {
    double x = 0.0;
    int n = 0;
    double t_in = 0.0;
    double t_circ = 0.0;
    double t_total = 0.0;
    bool feasible = false;
};

inline std::vector<double> grid(const RunConfig& cfg) {
    if (!cfg.from || !cfg.to || !cfg.step) throw sweep::ConfigError("study commands need --from, --to and --step");
    if (!(*cfg.step > 0.0)) throw sweep::ConfigError("--step must be positive");
    if (!(*cfg.to >= *cfg.from)) throw sweep::ConfigError("--to must not be below --from");
    const long count = static_cast<long>(std::floor((*cfg.to - *cfg.from) / *cfg.step + 1e-9)) + 1;
    std::vector<double> xs;
    for (long k = 0; k < count; ++k) xs.push_back(*cfg.from + static_cast<double>(k) * *cfg.step);
    return xs;
}

inline StudyRow study_point(double x, const sweep::SearchParams& params) {
    using namespace sweep;
    const SearchParams p = validate(params);
    if (!(p.deltaV > 0.0)) throw DomainError("deltaV", "must be positive");
    const double vs = planner_speed(p);
    StudyRow row;
    row.x = x;
    row.n = num_iterations(vs, p);
    const AggregateTimes a = aggregate_times(vs, p);
    const EndGameRecord e = end_game(vs, p);
    row.t_in = a.t_in_total;
    row.t_circ = a.t_circular_total;
    row.t_total = a.t_in_total + a.t_circular_total + e.t_one;
    row.feasible = e.feasible;
    return row;
}

inline int cmd_study(const RunConfig& cfg, std::ostream& out) {
    using namespace sweep;
    const bool by_alpha = cfg.command == "study-alpha";
    std::vector<StudyRow> rows;
    for (double x : grid(cfg)) {
        SearchParams p = cfg.params;
        if (by_alpha) p.R0 = x * p.r; else p.deltaV = x * p.VT;
        rows.push_back(study_point(x, p));
    }
    const char* key = by_alpha ? "alpha" : "delta_v";
    if (cfg.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const StudyRow& r : rows) {
            j.push_back({{key, r.x},
                         {"n_iterations", r.n},
                         {"t_in_total", r.t_in},
                         {"t_circular_total", r.t_circ},
                         {"t_total", r.t_total},
                         {"circular_inward_ratio", r.t_circ / r.t_in},
                         {"feasible", r.feasible}});
        }
        emit(cfg, dump(j), out);
        return kOk;
    }
    std::ostringstream s;
    s << key << ",N,t_in_total,t_circular_total,t_total,circular_inward_ratio,feasible\n";
    for (const StudyRow& r : rows) {
        s << csv_number(r.x) << ',' << r.n << ',' << csv_number(r.t_in) << ',' << csv_number(r.t_circ) << ','
          << csv_number(r.t_total) << ',' << csv_number(r.t_circ / r.t_in) << ',' << (r.feasible ? 1 : 0) << '\n';
    }
    emit(cfg, s.str(), out);
    return kOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    verify::Options opt;
    opt.quick = cfg.quick;
    opt.seed = cfg.seed;
    const std::vector<verify::Check> checks = verify::run_all(opt);
    if (cfg.format == "json") {
        emit(cfg, dump(verify::to_json(checks, opt)), out);
    } else {
        std::ostringstream s;
        for (const verify::Check& c : checks) s << verify::format_line(c) << '\n';
        s << (verify::all_passed(checks) ? "verify: PASS" : "verify: FAIL") << '\n';
        emit(cfg, s.str(), out);
    }
    return verify::all_passed(checks) ? kOk : kVerifyFailed;
}

inline void add_params(CLI::App* sub, RunConfig& cfg, bool with_r0, bool with_dv) {
    if (with_r0) sub->add_option("--R0", cfg.params.R0, "initial evader-region radius");
    sub->add_option("--r", cfg.params.r, "sensor half-length");
    sub->add_option("--VT", cfg.params.VT, "maximal evader speed");
    if (with_dv) sub->add_option("--dV", cfg.params.deltaV, "speed above the Taylor critical velocity");
}

inline void add_range(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--from", cfg.from, "grid start")->required();
    sub->add_option("--to", cfg.to, "grid end (inclusive)")->required();
    sub->add_option("--step", cfg.step, "grid step")->required();
}

/// Fills options of `sub` that were not given on the command line from a
/// key=value file. Keys are option names without the leading dashes.
inline void apply_config(CLI::App* sub, const std::string& path) {
    const std::vector<CLI::ConfigItem> items = CLI::ConfigINI().from_file(path);
    for (const CLI::ConfigItem& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
        if (opt == nullptr) throw sweep::ConfigError("unknown key '" + item.name + "' for " + sub->get_name());
        if (opt->count() > 0) continue;
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

/// Parses argv and runs the chosen command. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Circular sweep planning for a line-sensor formation confining evaders in a disk"};
    // --h is the grid resolution, so help is long-form only.
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "key=value file supplying the same fields; flags win");
    RunConfig cfg;

    CLI::App* critical = app.add_subcommand("critical", "critical velocities with t* and f(t*)");
    add_params(critical, cfg, true, false);
    critical->add_option("--eps", cfg.eps, "bisection tolerance");

    CLI::App* plan = app.add_subcommand("plan", "complete sweep schedule");
    add_params(plan, cfg, true, true);

    CLI::App* sim = app.add_subcommand("simulate", "wavefront oracle run of the plan");
    add_params(sim, cfg, true, true);
    sim->add_option("--h", cfg.h, "grid resolution (default r/40)");
    sim->add_option("--dt", cfg.dt, "time step (default h/(2 vs))");
    sim->add_option("--n-samples", cfg.n_samples, "samples for the confinement check")->check(CLI::Range(1000, 100000000));
    sim->add_option("--vs", cfg.forced_vs, "drive the plan geometry at this speed instead");
    sim->add_option("--snapshots", cfg.snapshots, "per-step snapshot CSV file");
    sim->add_option("--snapshot-stride", cfg.snapshot_stride, "steps between snapshots");

    CLI::App* sa = app.add_subcommand("study-alpha", "N and times over a grid of alpha = R0/r");
    add_params(sa, cfg, false, true);
    add_range(sa, cfg);

    CLI::App* sd = app.add_subcommand("study-deltav", "N and times over a grid of deltaV/VT");
    add_params(sd, cfg, true, false);
    add_range(sd, cfg);

    CLI::App* ver = app.add_subcommand("verify", "run the acceptance checks");
    ver->add_flag("--quick", cfg.quick, "skip the full simulation");
    ver->add_option("--seed", cfg.seed, "seed for the random parameter draws");

    for (CLI::App* sub : {critical, plan, sim, sa, sd, ver}) {
        sub->add_option("--output", cfg.output, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (!config_path.empty()) {
        try {
            apply_config(chosen, config_path);
        } catch (const std::exception& e) {
            err << "error: config: " << e.what() << '\n';
            return kInvalid;
        }
    }
    if (chosen->count("--format") == 0) {
        // Studies are tables, verify is a line report, everything else a document.
        if (cfg.command == "study-alpha" || cfg.command == "study-deltav") cfg.format = "csv";
        else if (cfg.command == "verify") cfg.format = "text";
        else cfg.format = "json";
    }

    try {
        if (cfg.command == "critical") return cmd_critical(cfg, out);
        if (cfg.command == "plan") return cmd_plan(cfg, out);
        if (cfg.command == "simulate") return cmd_simulate(cfg, out);
        if (cfg.command == "study-alpha" || cfg.command == "study-deltav") return cmd_study(cfg, out);
        return cmd_verify(cfg, out);
    } catch (const sweep::InfeasibleError& e) {
        err << "error: " << e.what() << "\n";
        err << "delta_v_threshold=" << sweep::csv_number(e.threshold())
            << " exact_threshold=" << sweep::csv_number(e.exact_threshold()) << '\n';
        return kInfeasible;
    } catch (const sweep::DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const sweep::Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
}

}  // namespace cli
