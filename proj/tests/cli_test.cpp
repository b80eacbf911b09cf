#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "bridgekit/cli/commands.hpp"
#include "bridgekit/cli/config.hpp"
#include "bridgekit/cli/csv.hpp"
#include "bridgekit/cli/svg.hpp"
#include "bridgekit/error.hpp"

using namespace bridgekit;
using namespace bridgekit::cli;
namespace fs = std::filesystem;

namespace {

ProblemConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 999;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("bridgekit_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST(Config, Defaults) {
    const auto c = parse("");
    EXPECT_EQ(c.kernel, Potential::zero);
    EXPECT_EQ(c.epsilon, 1.0);
    EXPECT_EQ(c.x0, -3.0);
    EXPECT_EQ(c.x1, 3.0);
    EXPECT_EQ(c.grid_n, 512u);
    EXPECT_EQ(c.time_samples, 41u);
    EXPECT_EQ(c.tol, 1e-9);
    EXPECT_EQ(c.maxiter, 100000u);
    EXPECT_EQ(c.ou_formula, OuFormula::exact);
    EXPECT_EQ(c.grid(), Grid(-11.0, 11.0, 512));
}

TEST(Config, ParsesKeysAndComments) {
    const auto c = parse(
        "# instance of the mean figure\n"
        "\n"
        "kernel = ou   # curvature 1\n"
        "epsilon=0.5\n"
        "  x0 = 1\n"
        "x1 = 7\n"
        "grid_lo = -10\n"
        "grid_hi = 20\n"
        "grid_n = 300\n"
        "time_samples = 21\n"
        "tol = 1e-8\n"
        "maxiter = 500\n"
        "ou_formula = published\n");
    EXPECT_EQ(c.kernel, Potential::quadratic);
    EXPECT_EQ(c.epsilon, 0.5);
    EXPECT_EQ(c.x0, 1.0);
    EXPECT_EQ(c.x1, 7.0);
    EXPECT_EQ(c.grid(), Grid(-10.0, 20.0, 300));
    EXPECT_EQ(c.time_samples, 21u);
    EXPECT_EQ(c.tol, 1e-8);
    EXPECT_EQ(c.maxiter, 500u);
    EXPECT_EQ(c.ou_formula, OuFormula::published);
    EXPECT_EQ(c.model().name(), "ou");
    EXPECT_EQ(c.model(Potential::zero).epsilon(), 0.5);
}

TEST(Config, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("kernel = heat\ncolour = red\n"), 2u);
    EXPECT_EQ(error_line("x0 = 1\n\nx0 = 2\n"), 3u);
    EXPECT_EQ(error_line("grid_n = 32\n"), 1u);
    EXPECT_EQ(error_line("# c\ntime_samples = 2\n"), 2u);
    EXPECT_EQ(error_line("kernel = gauss\n"), 1u);
    EXPECT_EQ(error_line("epsilon = -1\n"), 1u);
    EXPECT_EQ(error_line("epsilon = 1x\n"), 1u);
    EXPECT_EQ(error_line("epsilon\n"), 1u);
    EXPECT_EQ(error_line("x1 =\n"), 1u);
    EXPECT_EQ(error_line("grid_n = 3.5\n"), 1u);
    EXPECT_THROW(parse("grid_lo = 5\ngrid_hi = 1\n").grid(), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/bridgekit.cfg"), ConfigError);
}

TEST(Arguments, SuitesAndEpsilonLists) {
    EXPECT_EQ(parse_suite("duality"), Suite::duality);
    EXPECT_EQ(parse_suite("all"), Suite::all);
    EXPECT_THROW(parse_suite("everything"), ConfigError);
    EXPECT_EQ(parse_epsilon_list("1,0.5,0.2"), (std::vector<double>{1.0, 0.5, 0.2}));
    EXPECT_EQ(parse_epsilon_list("1"), (std::vector<double>{1.0}));
    EXPECT_THROW(parse_epsilon_list("0.5,1"), ConfigError);
    EXPECT_THROW(parse_epsilon_list("1,1"), ConfigError);
    EXPECT_THROW(parse_epsilon_list("1,-0.5"), ConfigError);
    EXPECT_THROW(parse_epsilon_list("1,,0.5"), ConfigError);
    EXPECT_THROW(parse_epsilon_list(""), ConfigError);
}

TEST(Checks, Kinds) {
    EXPECT_TRUE(make_check("a", 1.0, 1.0 + 1e-7, 1e-6, CheckKind::identity).pass);
    EXPECT_FALSE(make_check("a", 1.0, 1.1, 1e-6, CheckKind::identity).pass);
    EXPECT_TRUE(make_check("b", 1.0, 0.9999999, 1e-6, CheckKind::inequality).pass);
    EXPECT_FALSE(make_check("b", 1.0, 0.9, 1e-6, CheckKind::inequality).pass);
    EXPECT_FALSE(make_check("c", 1.0, 1.0, 0.0, CheckKind::strict).pass);
    const auto r = make_check("c", 0.5, 1.0, 0.0, CheckKind::strict);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.slack, 0.5);
    EXPECT_FALSE(make_check("d", std::nan(""), 1.0, 1.0, CheckKind::inequality).pass);
}

TEST(Checks, CommutationFunctionsAreBounded) {
    const Grid g(-30.0, 30.0, 1201);
    const auto fs = commutation_test_functions(g);
    EXPECT_EQ(fs.size(), 5u);
    for (const auto& f : fs) EXPECT_LT(f.sup_norm(), 100.0);
}

TEST(Checks, RunGuardedMapsErrors) {
    testing::internal::CaptureStderr();
    EXPECT_EQ(run_guarded([] { return 0; }), exit_ok);
    EXPECT_EQ(run_guarded([]() -> int { throw ConfigError("x", 1); }), exit_config);
    EXPECT_EQ(run_guarded([]() -> int { throw InputError("x"); }), exit_config);
    EXPECT_EQ(run_guarded([]() -> int { throw ConvergenceError("x", 1.0, 3); }), exit_nonconvergence);
    EXPECT_EQ(run_guarded([]() -> int { throw IllConditionedPathError("x"); }), exit_assertion);
    testing::internal::GetCapturedStderr();
}

TEST_F(TempDir, CsvRoundTrip) {
    EXPECT_EQ(CsvWriter::number(0.1), "0.10000000000000001");
    EXPECT_EQ(CsvWriter::number(-3.0), "-3");
    EXPECT_EQ(CsvWriter::number(std::nan("")), "nan");
    {
        CsvWriter w(path("a.csv"), {"x", "y"});
        w.row(std::vector<double>{1.5, 1e-300});
        w.row(std::vector<std::string>{"2", "nan"});
        EXPECT_THROW(w.row(std::vector<double>{1.0}), InputError);
    }
    EXPECT_EQ(slurp(dir_ / "a.csv"), "x,y\n1.5,1e-300\n2,nan\n");
    const auto t = read_csv(path("a.csv"));
    EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(t.numbers("x"), (std::vector<double>{1.5, 2.0}));
    EXPECT_TRUE(std::isnan(t.numbers("y")[1]));
    EXPECT_THROW(t.column("z"), InputError);
}

TEST_F(TempDir, SvgIsWellFormed) {
    write_svg(path("p.svg"), {{"panel", {{"a", {0.0, 1.0}, {1.0, 1.0}, Stroke::dotted},
                                         {"b", {0.0, 1.0}, {0.0, 2.0}, Stroke::dashed}}}});
    const auto s = slurp(dir_ / "p.svg");
    EXPECT_EQ(s.rfind("<?xml", 0), 0u);
    EXPECT_NE(s.find("viewBox=\"0 0 800 600\""), std::string::npos);
    EXPECT_NE(s.find("stroke-dasharray=\"2,4\""), std::string::npos);
    EXPECT_NE(s.find("stroke-dasharray=\"8,4\""), std::string::npos);
    EXPECT_EQ(s.substr(s.size() - 7), "</svg>\n");
    EXPECT_THROW(write_svg(path("q.svg"), {}), InputError);
}

TEST_F(TempDir, BridgeOutputs) {
    ProblemConfig c;
    c.ou_formula = OuFormula::published;
    ASSERT_EQ(cmd_bridge(c, path("run")), exit_ok);
    for (const char* f : {"moments.csv", "density_t0.csv", "density_t0.5.csv", "density_t1.csv", "bridge.svg"})
        EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
    const auto m = read_csv(path("run/moments.csv"));
    EXPECT_EQ(m.header, (std::vector<std::string>{"t", "mean_mccann", "mean_heat", "mean_ou", "var_mccann", "var_heat",
                                                  "var_ou"}));
    ASSERT_EQ(m.rows.size(), 41u);
    const auto mm = m.numbers("mean_mccann"), mh = m.numbers("mean_heat");
    for (std::size_t i = 0; i < mm.size(); ++i) EXPECT_NEAR(mm[i], mh[i], 1e-10);
    for (const char* col : {"var_heat", "var_ou"}) {
        const auto v = m.numbers(col);
        EXPECT_NEAR(v.front(), 1.0, 1e-10);
        EXPECT_NEAR(v.back(), 1.0, 1e-10);
        EXPECT_EQ(std::max_element(v.begin(), v.end()) - v.begin(), 20) << col;
    }
    const auto d = read_csv(path("run/density_t0.5.csv"));
    EXPECT_EQ(d.header, (std::vector<std::string>{"x", "mccann", "heat", "ou"}));
    EXPECT_EQ(d.rows.size(), 512u);
}

TEST_F(TempDir, BridgeIsDeterministic) {
    ProblemConfig c;
    c.x0 = 1.0;
    c.x1 = 7.0;
    ASSERT_EQ(cmd_bridge(c, path("a")), exit_ok);
    ASSERT_EQ(cmd_bridge(c, path("b")), exit_ok);
    for (const char* f : {"moments.csv", "density_t0.csv", "density_t0.5.csv", "density_t1.csv", "bridge.svg"})
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    // Mean curves climb from 1 to 7.
    const auto m = read_csv(path("a/moments.csv"));
    for (const char* col : {"mean_mccann", "mean_heat", "mean_ou"}) {
        const auto v = m.numbers(col);
        EXPECT_NEAR(v.front(), 1.0, 1e-10);
        EXPECT_NEAR(v.back(), 7.0, 1e-10);
        for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GT(v[i], v[i - 1]) << col;
    }
}

TEST_F(TempDir, VerifyDualityPasses) {
    ProblemConfig c;
    testing::internal::CaptureStderr();
    EXPECT_EQ(cmd_verify(c, Suite::duality, path("v")), exit_ok);
    testing::internal::GetCapturedStderr();
    const auto r = read_csv(path("v/report.csv"));
    EXPECT_EQ(r.header, (std::vector<std::string>{"check", "lhs", "rhs", "slack", "tolerance", "pass"}));
    EXPECT_GE(r.rows.size(), 53u);
    for (const auto& row : r.rows) EXPECT_EQ(row.back(), "pass") << row.front();
}

TEST_F(TempDir, VerifyNamesFirstFailure) {
    ProblemConfig c;
    c.time_samples = 5;  // far too coarse in time for the residual checks
    testing::internal::CaptureStderr();
    EXPECT_EQ(cmd_verify(c, Suite::decomposition, path("v")), exit_assertion);
    const std::string err = testing::internal::GetCapturedStderr();
    EXPECT_NE(err.find("check failed: continuity_current"), std::string::npos) << err;
    // The report is still written in full.
    EXPECT_TRUE(fs::exists(dir_ / "v" / "report.csv"));
}

TEST_F(TempDir, VerifyNonConvergence) {
    ProblemConfig c;
    c.maxiter = 3;
    testing::internal::CaptureStderr();
    EXPECT_EQ(run_guarded([&] { return cmd_verify(c, Suite::duality, path("v")); }), exit_nonconvergence);
    testing::internal::GetCapturedStderr();
}

TEST_F(TempDir, LimitsSingleEpsilon) {
    ProblemConfig c;
    ASSERT_EQ(cmd_limits(c, {1.0}, path("l")), exit_ok);
    const auto t = read_csv(path("l/limits.csv"));
    EXPECT_EQ(t.header, (std::vector<std::string>{"epsilon", "scaled_cost", "w2_half", "abs_error"}));
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.numbers("w2_half")[0], 18.0);
    EXPECT_TRUE(fs::exists(dir_ / "l" / "limits.svg"));
}

TEST_F(TempDir, LimitsWithoutTransportGoToZero) {
    ProblemConfig c;
    c.x0 = c.x1 = 0.0;
    c.grid_lo = -12.0;
    c.grid_hi = 12.0;
    ASSERT_EQ(cmd_limits(c, {1.0, 0.5, 0.2}, path("l")), exit_ok);
    const auto t = read_csv(path("l/limits.csv"));
    const auto err = t.numbers("abs_error");
    EXPECT_EQ(t.numbers("w2_half")[0], 0.0);
    EXPECT_GT(err[0], err[1]);
    EXPECT_GT(err[1], err[2]);
}

TEST_F(TempDir, LimitsReportsFailedRowsAndContinues) {
    ProblemConfig c;
    c.maxiter = 40;  // enough at eps = 1, not at eps = 0.1
    testing::internal::CaptureStderr();
    EXPECT_EQ(cmd_limits(c, {1.0, 0.1}, path("l")), exit_nonconvergence);
    testing::internal::GetCapturedStderr();
    const auto t = read_csv(path("l/limits.csv"));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_TRUE(std::isfinite(t.numbers("scaled_cost")[0]));
    EXPECT_TRUE(std::isnan(t.numbers("scaled_cost")[1]));
}
