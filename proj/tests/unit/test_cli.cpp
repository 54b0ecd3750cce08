// Drives the built executable end to end and checks exit codes, files and the
// machine-readable error line.

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(MAVEL_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    std::array<char, 4096> buf{};
    while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) {
        r.output.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mavel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string out() const { return "--out " + dir_.string(); }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, OptimizeWritesAllArtifacts) {
    const auto r = run("optimize " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("optimize: scheme=proposed ee=0.2"), std::string::npos) << r.output;
    EXPECT_EQ(slurp(dir_ / "profile.csv").substr(0, 6), "t,v,x\n");
    EXPECT_EQ(slurp(dir_ / "coefficients.csv").substr(0, 6), "n,c_n\n");
    EXPECT_EQ(slurp(dir_ / "trace.csv").substr(0, 4), "iter");
}

TEST_F(CliTest, BaselineBinary) {
    const auto r = run("baseline --type binary " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("ee=0.061"), std::string::npos) << r.output;
    EXPECT_TRUE(fs::exists(dir_ / "profile.csv"));
    EXPECT_FALSE(fs::exists(dir_ / "coefficients.csv"));
}

TEST_F(CliTest, RefusesToClobberUnlessForced) {
    ASSERT_EQ(run("baseline --type uniform " + out()).code, 0);
    const auto again = run("baseline --type uniform " + out());
    EXPECT_EQ(again.code, 4);
    EXPECT_NE(again.output.find("error code=4 kind=output"), std::string::npos) << again.output;
    EXPECT_EQ(run("baseline --type uniform --force " + out()).code, 0);
}

TEST_F(CliTest, InfeasibleAndNonConvergedExitCodes) {
    const auto inf = run("optimize --set eta=1 " + out());
    EXPECT_EQ(inf.code, 2) << inf.output;
    EXPECT_NE(inf.output.find("kind=infeasible"), std::string::npos);
    const auto nc = run("optimize --set max_outer=1 " + out());
    EXPECT_EQ(nc.code, 3) << nc.output;
    EXPECT_NE(nc.output.find("kind=non-convergence"), std::string::npos);
}

TEST_F(CliTest, ConfigAndUsageErrorsExitWithFour) {
    EXPECT_EQ(run(out()).code, 4);
    EXPECT_EQ(run("optimize --set bogus=1 " + out()).code, 4);
    EXPECT_EQ(run("optimize --set eta=0 " + out()).code, 4);
    EXPECT_EQ(run("baseline --type zigzag " + out()).code, 4);
    EXPECT_EQ(run("sweep --param mass --values 1 " + out()).code, 4);
    EXPECT_EQ(run("sweep --param N --values 2.5 " + out()).code, 4);
    EXPECT_EQ(run("optimize --config " + (dir_ / "missing.cfg").string() + " " + out()).code, 4);
}

TEST_F(CliTest, ConfigFileAndOverridesCompose) {
    {
        std::ofstream cfg(dir_ / "run.cfg");
        cfg << "N = 3\nalpha2 = 0.01\n";
    }
    const auto r = run("sweep --param L --values 4,6 --config " + (dir_ / "run.cfg").string() +
                       " --set alpha2=0.1 --jobs 2 " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    const std::string csv = slurp(dir_ / "sweep.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "param,value,scheme,variance,energy,ee,status");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
    EXPECT_NE(csv.find("L,6,binary,"), std::string::npos);
}

TEST_F(CliTest, RegionOnACoarseGrid) {
    const auto r = run("region --points 5 " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("region: points=25"), std::string::npos) << r.output;
    const std::string csv = slurp(dir_ / "region.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "c1,c2,sos,l1,l2,truth");
    EXPECT_NE(csv.find("\n0,0,1,1,1,1\n"), std::string::npos) << csv;
}

TEST_F(CliTest, TracePrintsTheCsv) {
    const auto r = run("trace --set N=3 " + out());
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("iter,xi,variance,energy,inner_iters,inner_step_norm"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "trace.csv"));
}
