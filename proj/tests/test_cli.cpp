#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli_commands.hpp"

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "sweep");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

std::vector<std::string> fields(const std::string& row) {
    std::vector<std::string> v;
    std::istringstream is(row);
    for (std::string f; std::getline(is, f, ',');) v.push_back(f);
    return v;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("sweep_cli_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(CliCritical, ReferenceVelocities) {
    const Outcome o = run({"critical", "--R0", "100", "--r", "10", "--VT", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    std::map<std::string, double> v;
    for (const auto& row : j.at("velocities")) v[row.at("name")] = row.at("value");
    EXPECT_NEAR(v.at("v_one_cycle"), 62.83185307, 1e-7);
    EXPECT_NEAR(v.at("v_c_arc"), 63.8335, 1e-3);
    EXPECT_NEAR(v.at("v_s2"), 62.84631837, 1e-7);
}

TEST(CliCritical, EqualRadiiArcSpeed) {
    const Outcome o = run({"critical", "--R0", "10", "--r", "10", "--VT", "1", "--format", "csv"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto rows = lines(o.out);
    EXPECT_EQ(rows.front(), "name,value,t_star,f_at_t_star,t_min,f_min,clamped");
    bool found = false;
    for (const std::string& r : rows) {
        const auto f = fields(r);
        if (f[0] == "v_c_arc") {
            found = true;
            EXPECT_NEAR(std::stod(f[1]), 2.5 * sweep::kPi, 1e-8);
        }
    }
    EXPECT_TRUE(found);
}

TEST(CliCritical, NegativeRadiusIsAValidationError) {
    const Outcome o = run({"critical", "--R0", "-5", "--r", "10", "--VT", "1"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("R0"), std::string::npos);
}

TEST(CliPlan, ReferenceTotals) {
    const Outcome o = run({"plan", "--R0", "100", "--r", "10", "--VT", "1", "--dV", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_NEAR(j.at("summary").at("t_total").get<double>(), 349.3854, 1e-3);
    EXPECT_EQ(j.at("summary").at("n_iterations").get<int>(), 45);
}

TEST(CliPlan, JsonRoundTripsThroughTheModel) {
    const Outcome o = run({"plan", "--R0", "100", "--r", "10", "--VT", "1", "--dV", "1", "--format", "json"});
    ASSERT_EQ(o.code, 0);
    const auto plan = nlohmann::json::parse(o.out).at("plan").get<sweep::SweepPlan>();
    EXPECT_EQ(plan, sweep::build_plan({100, 10, 1, 1}));
}

TEST(CliPlan, InfeasibleExitsWithThreshold) {
    const Outcome o = run({"plan", "--R0", "10", "--r", "10", "--VT", "1", "--dV", "1"});
    EXPECT_EQ(o.code, 3);
    EXPECT_NE(o.err.find("delta_v_threshold=3.83"), std::string::npos) << o.err;
}

TEST(CliPlan, RejectsARange) {
    EXPECT_EQ(run({"plan", "--from", "1", "--to", "2", "--step", "1"}).code, 2);
}

TEST(CliPlan, CsvHasFixedHeader) {
    const Outcome o = run({"plan", "--format", "csv"});
    ASSERT_EQ(o.code, 0);
    const auto rows = lines(o.out);
    EXPECT_EQ(rows.front(), "i,R_i,t_sweep,delta_eff,t_in_i");
    EXPECT_EQ(rows.size(), 46u);
}

TEST(CliStudy, AlphaGridRowsAndMonotoneIterations) {
    const Outcome o = run({"study-alpha", "--from", "2", "--to", "100", "--step", "1", "--dV", "1", "--VT", "1", "--r", "10"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto rows = lines(o.out);
    ASSERT_EQ(rows.size(), 100u);
    EXPECT_EQ(rows[0], "alpha,N,t_in_total,t_circular_total,t_total,circular_inward_ratio,feasible");
    int prev = -1;
    for (size_t k = 1; k < rows.size(); ++k) {
        const int n = std::stoi(fields(rows[k])[1]);
        EXPECT_GE(n, prev);
        prev = n;
    }
}

TEST(CliStudy, DeltaVGridIterationsStepDown) {
    const Outcome o = run({"study-deltav", "--from", "0.1", "--to", "10", "--step", "0.1", "--R0", "100", "--r", "10", "--VT", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto rows = lines(o.out);
    ASSERT_EQ(rows.size(), 101u);
    int prev = 1 << 30;
    int changes = 0;
    for (size_t k = 1; k < rows.size(); ++k) {
        const int n = std::stoi(fields(rows[k])[1]);
        EXPECT_LE(n, prev);
        if (k > 1 && n != prev) ++changes;
        prev = n;
    }
    EXPECT_GT(changes, 0);
    EXPECT_LT(changes, 99) << "iteration count should be piecewise constant";
}

TEST(CliStudy, RowAgreesWithPlan) {
    const Outcome o = run({"study-deltav", "--from", "1", "--to", "1", "--step", "1"});
    ASSERT_EQ(o.code, 0);
    const auto f = fields(lines(o.out)[1]);
    EXPECT_EQ(f[1], "45");
    EXPECT_NEAR(std::stod(f[4]), 349.3854, 1e-3);
}

TEST(CliStudy, RequiresAValidRange) {
    EXPECT_EQ(run({"study-alpha"}).code, 2);
    EXPECT_EQ(run({"study-alpha", "--from", "2", "--to", "1", "--step", "1"}).code, 2);
    EXPECT_EQ(run({"study-alpha", "--from", "2", "--to", "3", "--step", "0"}).code, 2);
    EXPECT_EQ(run({"study-alpha", "--from", "2", "--to", "3", "--step", "-1"}).code, 2);
}

TEST(CliOutput, ByteIdenticalAcrossRuns) {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"plan", "--format", "json"}, {"plan", "--format", "csv"},
          {"critical"}, {"study-deltav", "--from", "0.5", "--to", "5", "--step", "0.5"}}) {
        EXPECT_EQ(run(args).out, run(args).out);
    }
}

TEST(CliOutput, DirectoryOverrideForRelativePaths) {
    const auto dir = scratch_dir("outdir");
    ::setenv(cli::kOutputDirEnv, dir.c_str(), 1);
    const Outcome o = run({"plan", "--format", "csv", "--output", "nested/plan.csv"});
    ::unsetenv(cli::kOutputDirEnv);
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(o.out.empty());
    std::ifstream f(dir / "nested" / "plan.csv");
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, "i,R_i,t_sweep,delta_eff,t_in_i");
}

TEST(CliConfig, FileSuppliesFieldsAndFlagsWin) {
    const auto dir = scratch_dir("config");
    const auto path = dir / "run.ini";
    std::ofstream(path) << "# instance\nR0=50\ndV=2\n";
    const auto from_file = nlohmann::json::parse(run({"--config", path.string(), "plan"}).out);
    EXPECT_DOUBLE_EQ(from_file.at("plan").at("params").at("R0").get<double>(), 50.0);
    EXPECT_DOUBLE_EQ(from_file.at("plan").at("params").at("deltaV").get<double>(), 2.0);
    const auto flag_wins = nlohmann::json::parse(run({"--config", path.string(), "plan", "--dV", "3"}).out);
    EXPECT_DOUBLE_EQ(flag_wins.at("plan").at("params").at("deltaV").get<double>(), 3.0);
    EXPECT_DOUBLE_EQ(flag_wins.at("plan").at("params").at("R0").get<double>(), 50.0);
}

TEST(CliConfig, UnknownKeyIsRejected) {
    const auto dir = scratch_dir("badconfig");
    const auto path = dir / "run.ini";
    std::ofstream(path) << "R0=50\nbogus=1\n";
    EXPECT_EQ(run({"--config", path.string(), "plan"}).code, 2);
}

TEST(CliSimulate, CoarseGridIsRejected) {
    EXPECT_EQ(run({"simulate", "--R0", "30", "--h", "1"}).code, 2);
}

TEST(CliSimulate, SmallInstanceCsv) {
    const Outcome o = run({"simulate", "--R0", "20", "--h", "0.5", "--format", "csv"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto rows = lines(o.out);
    EXPECT_EQ(rows.front(), "i,planned_R_i,simulated_R_i");
    EXPECT_EQ(rows.size(), static_cast<size_t>(sweep::build_plan({20, 10, 1, 1}).n_iterations) + 1);
}

TEST(CliSimulate, SummaryJson) {
    const Outcome o = run({"simulate", "--R0", "20", "--h", "0.5", "--n-samples", "1000"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_FALSE(j.at("escaped").get<bool>());
    EXPECT_TRUE(j.contains("confinement_gap"));
    EXPECT_TRUE(j.contains("planned_radii"));
}

TEST(CliVerify, QuickRunReportsEveryCriterion) {
    const Outcome a = run({"verify", "--quick", "--seed", "7"});
    const Outcome b = run({"verify", "--quick", "--seed", "7"});
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 10u);
    for (int k = 0; k < 9; ++k) EXPECT_EQ(rows[k].rfind("criterion " + std::to_string(k + 1) + " ", 0), 0u);
    EXPECT_NE(rows[6].find("SKIP"), std::string::npos);
    EXPECT_EQ(a.code, rows.back() == "verify: PASS" ? 0 : 1);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
}

TEST(CliHelp, LongFormOnly) {
    const Outcome o = run({"--help"});
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("simulate"), std::string::npos);
}
