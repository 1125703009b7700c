#include "padic/harmonic.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace padic;
using padic::testing::random_complex;
using padic::testing::random_real;

namespace {

// (1/M) sum_a f(a) exp(2 pi i a b / M) with a fresh std::polar per term.
SpectralFunction naive_forward(const GridFunction& f) {
    const std::int64_t M = f.size();
    SpectralFunction c(f.grid());
    for (std::int64_t b = 0; b < M; ++b) {
        Complex acc{};
        for (std::int64_t a = 0; a < M; ++a) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((a * b) % M) / static_cast<double>(M);
            acc += f[a] * std::polar(1.0, angle);
        }
        c[b] = acc / static_cast<double>(M);
    }
    return c;
}

}  // namespace

TEST(Forward, ConstantGoesToZeroMode) {
    const BallGrid g(3, 1, 1);
    const auto c = forward(GridFunction::constant(g, {2.5, -1.0}));
    EXPECT_NEAR(std::abs(c[0] - Complex(2.5, -1.0)), 0.0, 1e-14);
    for (std::int64_t b = 1; b < c.size(); ++b) EXPECT_NEAR(std::abs(c[b]), 0.0, 1e-14);
}

TEST(Forward, CharacterGoesToIndicator) {
    const BallGrid g(2, 1, 3);
    for (std::int64_t b0 = 0; b0 < g.size(); ++b0) {
        const auto c = forward(character_function(g, {b0}));
        for (std::int64_t b = 0; b < g.size(); ++b) ASSERT_NEAR(std::abs(c[b] - (b == b0 ? 1.0 : 0.0)), 0.0, 1e-13);
    }
}

TEST(Forward, AgreesWithNaiveSum) {
    std::mt19937_64 rng(11);
    for (const auto& s : padic::testing::small_shapes()) {
        const BallGrid g(s.p, s.N, s.K);
        const auto f = random_complex(g, rng);
        EXPECT_LT(max_abs_diff(forward(f), naive_forward(f)), 1e-13);
    }
}

TEST(Inverse, Examples) {
    const BallGrid g(5, 0, 2);
    SpectralFunction c(g);
    c[0] = {0.75, 0.0};
    const auto f = inverse(c);
    for (std::int64_t a = 0; a < g.size(); ++a) EXPECT_NEAR(std::abs(f[a] - 0.75), 0.0, 1e-15);

    SpectralFunction e(g);
    e[7] = 1.0;
    EXPECT_LT(max_abs_diff(inverse(e), character_function(g, {7})), 1e-13);
}

TEST(RoundTrip, BothDirections) {
    std::mt19937_64 rng(5);
    for (const auto& s : padic::testing::small_shapes()) {
        const BallGrid g(s.p, s.N, s.K);
        for (int i = 0; i < 10; ++i) {
            const auto f = random_complex(g, rng);
            ASSERT_LT(max_abs_diff(inverse(forward(f)), f), 1e-12);
            const auto c = forward(random_complex(g, rng));
            ASSERT_LT(max_abs_diff(forward(inverse(c)), c), 1e-12);
        }
    }
}

TEST(L2Norm, Examples) {
    EXPECT_EQ(l2_norm(GridFunction(BallGrid(2, 0, 3))), 0.0);
    EXPECT_NEAR(l2_norm(GridFunction::constant(BallGrid(2, 0, 3), 1.0)), 1.0, 1e-15);
    EXPECT_NEAR(l2_norm(GridFunction::constant(BallGrid(2, 1, 3), 1.0)), std::sqrt(2.0), 1e-15);
}

TEST(Plancherel, Examples) {
    const BallGrid g(3, 1, 2);
    EXPECT_LT(plancherel_deficit(GridFunction::constant(g, 1.0)), 1e-15);
    EXPECT_EQ(plancherel_deficit(GridFunction(g)), 0.0);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) ASSERT_LT(plancherel_deficit(random_complex(g, rng)), 1e-12);
}

TEST(Plancherel, Polarized) {
    std::mt19937_64 rng(17);
    for (const auto& s : padic::testing::small_shapes()) {
        const BallGrid g(s.p, s.N, s.K);
        const auto f = random_complex(g, rng);
        const auto h = random_complex(g, rng);
        const auto cf = forward(f);
        const auto ch = forward(h);
        Complex spectral{};
        for (std::int64_t b = 0; b < g.size(); ++b) spectral += cf[b] * std::conj(ch[b]);
        const Complex physical = l2_inner(f, h) / g.measure();
        EXPECT_NEAR(std::abs(spectral - physical), 0.0, 1e-12);
    }
}

TEST(Forward, Linearity) {
    std::mt19937_64 rng(23);
    const BallGrid g(2, -1, 5);
    const auto f = random_complex(g, rng);
    const auto h = random_complex(g, rng);
    const Complex alpha{0.3, -1.2};
    const Complex beta{2.0, 0.5};
    const auto lhs = forward(alpha * f + beta * h);
    const auto cf = forward(f);
    const auto ch = forward(h);
    for (std::int64_t b = 0; b < g.size(); ++b) EXPECT_NEAR(std::abs(lhs[b] - (alpha * cf[b] + beta * ch[b])), 0.0, 1e-13);
}

TEST(Forward, TranslationLaw) {
    std::mt19937_64 rng(29);
    const BallGrid g(3, 0, 3);
    const auto f = random_complex(g, rng);
    const auto cf = forward(f);
    for (std::int64_t a0 : {1, 5, 9, 26}) {
        GridFunction shifted(g);
        for (std::int64_t a = 0; a < g.size(); ++a) shifted[a] = f[g.sub({a}, {a0}).value];
        const auto cs = forward(shifted);
        for (std::int64_t b = 0; b < g.size(); ++b) {
            ASSERT_NEAR(std::abs(cs[b] - g.character({a0}, {b}) * cf[b]), 0.0, 1e-13);
        }
    }
}

TEST(Forward, RealFunctionsHaveConjugateSymmetricCoefficients) {
    std::mt19937_64 rng(31);
    for (const auto& s : padic::testing::small_shapes()) {
        const BallGrid g(s.p, s.N, s.K);
        EXPECT_LT(forward(random_real(g, rng)).reality_defect(), 1e-14);
    }
    const BallGrid g(3, 0, 2);
    EXPECT_GT(forward(character_function(g, {1})).reality_defect(), 0.5);
}

TEST(FastTransform, AgreesWithDirectSum) {
    std::mt19937_64 rng(37);
    for (const auto& [p, N, K] : std::vector<padic::testing::GridShape>{{2, 0, 10}, {3, 1, 5}, {5, -1, 5}, {2, 3, 4}}) {
        const BallGrid g(p, N, K);
        const auto f = random_complex(g, rng);
        const auto direct = forward(f, TransformMethod::direct);
        const auto fast = forward(f, TransformMethod::fast);
        EXPECT_LT(max_abs_diff(direct, fast), 1e-12) << p << " " << N << " " << K;
        EXPECT_LT(max_abs_diff(inverse(fast, TransformMethod::fast), inverse(direct, TransformMethod::direct)), 1e-12);
        EXPECT_LT(max_abs_diff(inverse(fast, TransformMethod::fast), f), 1e-12);
    }
}

TEST(FastTransform, UsedAboveThreshold) {
    std::mt19937_64 rng(41);
    const BallGrid g(2, 0, 13);
    ASSERT_GT(g.size(), kFastTransformThreshold);
    const auto f = random_complex(g, rng);
    EXPECT_LT(max_abs_diff(inverse(forward(f)), f), 1e-12);
    EXPECT_LT(plancherel_deficit(f), 1e-12);
}

TEST(GridFunction, RejectsMismatchedGrids) {
    const GridFunction f(BallGrid(2, 0, 2));
    const GridFunction h(BallGrid(3, 0, 1));
    EXPECT_THROW(f + h, std::invalid_argument);
    EXPECT_THROW(GridFunction(BallGrid(2, 0, 2), std::vector<Complex>(3)), std::invalid_argument);
}
