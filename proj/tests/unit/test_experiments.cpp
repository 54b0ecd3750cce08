#include "mavel/errors.hpp"
#include "mavel/experiments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mavel;

namespace {

std::string first_line(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

std::size_t line_count(const std::string& csv) {
    return static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
}

} // namespace

TEST(Schemes, NamesRoundTrip) {
    for (Scheme s : all_schemes) {
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    }
    EXPECT_THROW(parse_scheme("zigzag"), ConfigError);
    EXPECT_EQ(parse_sweep_param("alpha2"), SweepParam::alpha2);
    EXPECT_THROW(parse_sweep_param("mass"), ConfigError);
}

TEST(Schemes, SweepValuesAreValidated) {
    const ProblemConfig cfg;
    EXPECT_EQ(with_sweep_value(cfg, SweepParam::N, 13.0).N, 13);
    EXPECT_EQ(with_sweep_value(cfg, SweepParam::L, 6.0).L, 6.0);
    EXPECT_THROW(with_sweep_value(cfg, SweepParam::N, 2.5), ConfigError);
    EXPECT_THROW(with_sweep_value(cfg, SweepParam::T, -1.0), ConfigError);
    EXPECT_THROW(with_sweep_value(cfg, SweepParam::alpha2, 0.0), ConfigError);
}

TEST(Schemes, BaselineRunsCarryOnlyTheirExtras) {
    const ProblemConfig cfg;
    const SchemeRun bin = run_scheme(Scheme::binary, cfg);
    EXPECT_NEAR(bin.metrics.ee, 0.0611, 1e-3);
    EXPECT_FALSE(bin.coefficients);
    EXPECT_FALSE(bin.trace);
    EXPECT_FALSE(bin.ramp_time);
    const SchemeRun trap = run_scheme(Scheme::trapezoidal, cfg);
    ASSERT_TRUE(trap.ramp_time);
    EXPECT_GT(*trap.ramp_time, 0.0);
}

TEST(Sweep, OrderingStatusesAndFailures) {
    ProblemConfig cfg;
    cfg.N = 5;
    // eta = 1 cannot be met by the proposed scheme; baselines still evaluate.
    cfg.eta = 1.0;
    const auto rows = run_sweep(cfg, SweepParam::L, {4.0, 6.0}, 0);
    ASSERT_EQ(rows.size(), 2 * all_schemes.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].value, i < all_schemes.size() ? 4.0 : 6.0);
        EXPECT_EQ(rows[i].scheme, all_schemes[i % all_schemes.size()]);
        if (rows[i].scheme == Scheme::proposed) {
            EXPECT_EQ(rows[i].status, "infeasible");
            EXPECT_TRUE(std::isnan(rows[i].ee));
        } else {
            EXPECT_EQ(rows[i].status, "ok");
            EXPECT_GT(rows[i].ee, 0.0);
        }
    }
    const std::string csv = sweep_csv(rows);
    EXPECT_EQ(first_line(csv), "param,value,scheme,variance,energy,ee,status");
    EXPECT_NE(csv.find("L,4,proposed,nan,nan,nan,infeasible"), std::string::npos) << csv;
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    ProblemConfig cfg;
    cfg.N = 3;
    const auto a = sweep_csv(run_sweep(cfg, SweepParam::alpha2, {0.01, 0.1}, 1));
    const auto b = sweep_csv(run_sweep(cfg, SweepParam::alpha2, {0.01, 0.1}, 4));
    EXPECT_EQ(a, b);
}

TEST(Csv, FormatsAndHeaders) {
    EXPECT_EQ(format_real(0.1), "0.1");
    EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_real(std::nan("")), "nan");

    SampledProfile v{{0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}};
    const std::string prof = profile_csv(v);
    EXPECT_EQ(prof, "t,v,x\n0,1,0\n0.5,1,0.5\n1,1,1\n");

    const std::string coef = coefficients_csv(Eigen::Vector2d(2.5, -1.0));
    EXPECT_EQ(coef, "n,c_n\n1,2.5\n2,-1\n");

    DinkelbachTrace tr;
    tr.records.push_back({0, 0.5, 1.0, 2.0, 0, 0.0, {}});
    EXPECT_EQ(trace_csv(tr), "iter,xi,variance,energy,inner_iters,inner_step_norm\n0,0.5,1,2,0,0\n");

    RegionPoint p;
    p.c1 = 0.123456789;
    p.c2 = -1.0;
    p.sos = p.truth = true;
    EXPECT_EQ(region_csv({p}), "c1,c2,sos,l1,l2,truth\n0.123457,-1,1,0,0,1\n");

    MonteCarloReport r{20.0, 2000, 2e-6, 1e-6, 2.0};
    EXPECT_EQ(mc_csv({r}), "snr_db,trials,mse,crb,ratio\n20,2000,2e-06,1e-06,2\n");
}

TEST(Output, RefusesToClobberWithoutForce) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "mavel_output_test";
    fs::remove_all(dir);
    const fs::path file = dir / "nested" / "a.csv";
    write_output(file, "one\n", false);
    EXPECT_THROW(write_output(file, "two\n", false), OutputError);
    write_output(file, "three\n", true);
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "three\n");
    EXPECT_EQ(line_count(ss.str()), 1u);
    EXPECT_FALSE(fs::exists(dir / "nested" / "a.csv.tmp"));
    fs::remove_all(dir);
}
