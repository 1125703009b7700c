#include "padic/errors.hpp"
#include "padic/vladimirov.hpp"
#include "padic_lab/config.hpp"
#include "padic_lab/generators.hpp"
#include "padic_lab/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace padic;
using namespace padic::lab;

namespace {

// Returns the message of the ConfigurationError raised by parsing `text`, or "" if none.
std::string parse_error(const std::string& text) {
    try {
        parse_config(text, "cfg.toml");
    } catch (const ConfigurationError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "padic_lab_config_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
    const auto cfg = parse_config("");
    EXPECT_EQ(cfg.grid.p, 2);
    EXPECT_EQ(cfg.grid.N, 1);
    EXPECT_EQ(cfg.grid.K, 3);
    EXPECT_DOUBLE_EQ(cfg.alpha, 0.5);
    EXPECT_DOUBLE_EQ(cfg.m, 2.0);
    EXPECT_EQ(cfg.verify.suites.size(), 11u);
    EXPECT_EQ(to_json(cfg), to_json(default_config()));
}

TEST(Config, ReadsEveryTable) {
    const auto cfg = parse_config(R"(
seed = 42
[grid]
p = 3
N = -1
K = 3
[operator]
alpha = 0.9
[nonlinearity]
m = 0.5
[solver]
tau = 0.02
horizon = 0.3
[solver.prox]
max_newton_per_stage = 12
[initial]
generator = "character:4"
amplitude = 2
[verify]
samples = 7
refinement_steps = [0.2, 0.1]
suites = [1, 3]
)");
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(cfg.grid.p, 3);
    EXPECT_EQ(cfg.grid.N, -1);
    EXPECT_DOUBLE_EQ(cfg.alpha, 0.9);
    EXPECT_DOUBLE_EQ(cfg.m, 0.5);
    EXPECT_DOUBLE_EQ(cfg.solver.tau, 0.02);
    EXPECT_EQ(cfg.solver.prox.max_newton_per_stage, 12);
    EXPECT_EQ(cfg.initial.generator, "character:4");
    EXPECT_DOUBLE_EQ(cfg.initial.amplitude, 2.0);
    EXPECT_EQ(cfg.verify.samples, 7);
    EXPECT_EQ(cfg.verify.suites, (std::vector<int>{1, 3}));
}

TEST(Config, CompositePrimeIsRejectedAtItsLine) {
    const auto msg = parse_error("seed = 1\n[grid]\np = 4\nN = 1\nK = 2\n");
    EXPECT_NE(msg.find("cfg.toml:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("p must be prime"), std::string::npos) << msg;
}

TEST(Config, EmptyGridIsRejectedAtK) {
    const auto msg = parse_error("[grid]\np = 2\nN = 0\nK = 0\n");
    EXPECT_NE(msg.find("cfg.toml:4:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("N + K must be >= 1"), std::string::npos) << msg;
}

TEST(Config, RejectsBadValuesWithPosition) {
    EXPECT_NE(parse_error("[operator]\nalpha = -0.5\n").find("cfg.toml:2:"), std::string::npos);
    EXPECT_NE(parse_error("[nonlinearity]\nm = 0\n").find("m must be positive"), std::string::npos);
    EXPECT_NE(parse_error("[solver]\ntau = 0.0\n").find("tau must be positive"), std::string::npos);
    EXPECT_NE(parse_error("[grid]\np = \"two\"\n").find("p must be an integer"), std::string::npos);
    EXPECT_NE(parse_error("[verify]\nrefinement_steps = [0.1, 0.2]\n").find("strictly decreasing"), std::string::npos);
    EXPECT_NE(parse_error("[verify]\nsuites = [0]\n").find("suites must list"), std::string::npos);
    EXPECT_NE(parse_error("[verify]\nsuites = [2, 2]\n").find("suites must list"), std::string::npos);
    EXPECT_NE(parse_error("[verify]\nfault_scale = 1.0\n").find("fault_scale"), std::string::npos);
}

TEST(Config, RejectsUnknownKeys) {
    const auto msg = parse_error("[grid]\np = 2\nprime = 3\n");
    EXPECT_NE(msg.find("cfg.toml:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("unknown key 'prime'"), std::string::npos) << msg;
    EXPECT_NE(parse_error("[grids]\n").find("unknown key 'grids'"), std::string::npos);
}

TEST(Config, SyntaxErrorsCarryAPosition) {
    const auto msg = parse_error("[grid]\np = = 2\n");
    EXPECT_NE(msg.find("cfg.toml:2:"), std::string::npos) << msg;
}

TEST(Config, ValidatesGenerators) {
    EXPECT_NE(parse_error("[initial]\ngenerator = \"gaussian\"\n").find("unknown generator 'gaussian'"),
              std::string::npos);
    EXPECT_NE(parse_error("[initial]\ngenerator = \"character:16\"\n").find("[0, 16)"), std::string::npos);
    EXPECT_NE(parse_error("[initial]\ngenerator = \"character:x\"\n").find("integer class"), std::string::npos);
    EXPECT_NE(parse_error("[initial]\ngenerator = \"indicator\"\nradius = 2\n").find("[-K, N]"), std::string::npos);
    EXPECT_NE(parse_error("[initial]\ngenerator = \"file\"\n").find("needs a path"), std::string::npos);
    EXPECT_EQ(parse_error("[initial]\ngenerator = \"indicator\"\nradius = -3\n"), "");
}

TEST(Config, LoadReportsTheFileName) {
    const auto path = scratch("bad.toml");
    std::ofstream(path) << "[grid]\np = 9\n";
    try {
        load_config(path);
        FAIL() << "expected a configuration error";
    } catch (const ConfigurationError& e) {
        EXPECT_NE(std::string(e.what()).find(path.string() + ":2:"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_config(scratch("missing.toml")), ConfigurationError);
}

TEST(Generators, RandomStreamsAreReproducibleAndIndependent) {
    const BallGrid g(2, 1, 3);
    auto a = make_rng(5, 1);
    auto b = make_rng(5, 1);
    auto c = make_rng(5, 2);
    const auto fa = random_real(g, a);
    EXPECT_EQ(max_abs_diff(fa, random_real(g, b)), 0.0);
    EXPECT_GT(max_abs_diff(fa, random_real(g, c)), 0.1);
}

TEST(Generators, ClosedFormInitialConditions) {
    const BallGrid g(3, 1, 2);
    InitialSpec spec;
    spec.generator = "psi0";
    spec.amplitude = 2.0;
    const auto psi = make_initial(spec, g, 1);
    for (std::int64_t a = 0; a < g.size(); ++a) EXPECT_NEAR(psi[a].real(), 2.0 / std::sqrt(3.0), 1e-15);

    spec.generator = "indicator";
    spec.amplitude = 1.0;
    spec.radius = 0;
    const auto ind = make_initial(spec, g, 1);
    for (std::int64_t a = 0; a < g.size(); ++a) EXPECT_EQ(ind[a].real(), g.point_abs({a}) <= 1.0 ? 1.0 : 0.0);

    spec.generator = "character:5";
    const auto chr = make_initial(spec, g, 1);
    for (std::int64_t a = 0; a < g.size(); ++a) {
        EXPECT_NEAR(chr[a].real(), std::cos(2.0 * std::numbers::pi * static_cast<double>(a * 5 % 27) / 27.0), 1e-14);
        EXPECT_EQ(chr[a].imag(), 0.0);
    }
}

TEST(Generators, FileRoundTripAndLinePreciseErrors) {
    const BallGrid g(2, 0, 2);
    const auto path = scratch("u0.csv");
    std::ofstream(path) << "index,value\n3,4.5\n0,1\n1,2\n2,-3\n";
    InitialSpec spec;
    spec.generator = "file";
    spec.path = path.string();
    const auto f = make_initial(spec, g, 1);
    EXPECT_EQ(f.real_values(), (std::vector<double>{1.0, 2.0, -3.0, 4.5}));

    std::ofstream(path) << "1\n2\nthree\n4\n";
    try {
        make_initial(spec, g, 1);
        FAIL() << "expected a configuration error";
    } catch (const ConfigurationError& e) {
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
    }
    std::ofstream(path) << "1\n2\n3\n";
    EXPECT_THROW(make_initial(spec, g, 1), ConfigurationError);
}

TEST(Report, NumbersRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}
