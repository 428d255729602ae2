#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"

using stable_psr::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream o, e;
    int code = run(args, o, e);
    return {code, o.str(), e.str()};
}

int count_lines(const std::string& s) { return int(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, HelpForEverySubcommand) {
    for (const char* sub : {"sample", "cf", "bound", "choose-c", "distance", "infer", "figures"}) {
        auto r = call({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
    }
    EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, SampleDeterministic) {
    for (const char* m : {"cms", "x0c", "xhat", "residual"}) {
        std::vector<std::string> a{"sample", "--method", m, "--alpha", "1.3", "--c", "20", "--n", "50", "--seed", "9"};
        auto r1 = call(a), r2 = call(a);
        EXPECT_EQ(r1.code, 0) << m << r1.err;
        EXPECT_EQ(r1.out, r2.out);
        EXPECT_EQ(r1.out.rfind("x\n", 0), 0u);
        EXPECT_EQ(count_lines(r1.out), 51);
    }
}

TEST(Cli, CfGrid) {
    auto r = call({"cf", "--form", "z-closed", "--alpha", "1.2", "--c", "10", "--var", "w", "--grid", "0:3:4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("w,re,im\n", 0), 0u);
    EXPECT_EQ(count_lines(r.out), 5);
    EXPECT_EQ(call({"cf", "--form", "z-closed", "--grid", "1:10", "--log"}).code, 2);
}

TEST(Cli, BoundAndChoose) {
    auto r = call({"bound", "--name", "b4", "--alpha", "0.2", "--c-grid", "10:60:2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("c,alpha,bound,branch\n", 0), 0u);
    EXPECT_NE(r.out.find("B2bar"), std::string::npos);
    auto j = call({"choose-c", "--alpha", "1.2", "--epsilon", "0.02", "--bound", "b5"});
    ASSERT_EQ(j.code, 0) << j.err;
    EXPECT_NE(j.out.find("\"c\""), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(call({"bound", "--name", "b1", "--alpha", "1", "--c-grid", "10:20:2"}).code, 3);
    EXPECT_EQ(call({"sample", "--alpha", "2.5"}).code, 3);
    EXPECT_EQ(call({"sample", "--bogus"}).code, 2);
    EXPECT_EQ(call({"nosuch"}).code, 2);
    auto r = call({"choose-c", "--alpha", "1.2", "--epsilon", "1e-300", "--bound", "b6"});
    EXPECT_EQ(r.code, 4);
    EXPECT_EQ(count_lines(r.err), 1);
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
}

TEST(Cli, DistanceAndInfer) {
    auto d = call({"distance", "--pair", "xhat", "--alpha", "1.2", "--c-grid", "10:10:1"});
    ASSERT_EQ(d.code, 0) << d.err;
    EXPECT_EQ(count_lines(d.out), 2);

    auto dir = std::filesystem::temp_directory_path() / "stable_psr_cli_test";
    std::filesystem::create_directories(dir);
    auto data = dir / "data.csv";
    {
        std::ofstream f(data);
        f << "x,g_1\n1.0,1.0\n2.1,2.0\n-0.9,-1.0\n0.4,0.5\n";
    }
    std::vector<std::string> args{"infer", "--data", data.string(), "--c", "4", "--iters", "300", "--burn-in", "50",
                                  "--chains", "2", "--seed", "3"};
    auto a = call(args), b = call(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("r_hat"), std::string::npos);
    std::filesystem::remove_all(dir);
}
