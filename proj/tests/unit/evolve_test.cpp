#include "padic/errors.hpp"
#include "padic/evolve.hpp"
#include "padic/sobolev.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace padic;
using padic::testing::random_real;

TEST(TimeGrid, UniformAndPartialFinalStep) {
    SolverConfig cfg;
    cfg.tau = 0.25;
    cfg.horizon = 1.0;
    EXPECT_EQ(time_grid(cfg), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
    cfg.tau = 0.3;
    const auto t = time_grid(cfg);
    ASSERT_EQ(t.size(), 5u);
    EXPECT_DOUBLE_EQ(t.back(), 1.0);
    EXPECT_NEAR(t[3], 0.9, 1e-15);
    cfg.tau = 0.1;
    EXPECT_EQ(time_grid(cfg).size(), 11u);
    EXPECT_DOUBLE_EQ(time_grid(cfg).back(), 1.0);
    cfg.tau = 0.0;
    EXPECT_THROW(time_grid(cfg), ConfigurationError);
}

TEST(Step, ZeroIsAnEquilibrium) {
    const VladimirovOperator op(BallGrid(2, 1, 3), 0.5);
    const auto u = step(GridFunction(op.grid()), SolverConfig{}, op, PowerLaw(2.0));
    EXPECT_EQ(max_abs_diff(u, GridFunction(op.grid())), 0.0);
}

TEST(Step, GroundStateDecaysGeometricallyWhenLinear) {
    const VladimirovOperator op(BallGrid(3, 1, 2), 0.5);
    const auto psi0 = eigenfunction_psi0(op.grid());
    SolverConfig cfg;
    cfg.tau = 0.1;
    auto u = psi0;
    for (int n = 1; n <= 8; ++n) {
        u = step(u, cfg, op, PowerLaw(1.0));
        auto expected = psi0;
        expected *= std::pow(1.0 + cfg.tau * op.lambda0(), -n);
        ASSERT_LT(max_abs_diff(u, expected), 1e-10);
    }
}

TEST(Step, PsiDecreases) {
    std::mt19937_64 rng(1);
    const VladimirovOperator op(BallGrid(2, 0, 4), 0.5);
    for (double m : {0.5, 2.0, 3.0}) {
        const PowerLaw nl(m);
        for (int i = 0; i < 5; ++i) {
            const auto u = random_real(op.grid(), rng);
            EXPECT_LE(psi_functional(step(u, SolverConfig{}, op, nl), nl), psi_functional(u, nl) + 1e-12);
        }
    }
}

TEST(Run, ZeroTrajectory) {
    const VladimirovOperator op(BallGrid(2, 0, 3), 0.5);
    SolverConfig cfg;
    cfg.tau = 0.25;
    const auto traj = run(GridFunction(op.grid()), cfg, op, PowerLaw(2.0));
    ASSERT_TRUE(traj.complete());
    ASSERT_EQ(traj.states.size(), 5u);
    for (const auto& d : traj.diagnostics) {
        EXPECT_EQ(d.l2, 0.0);
        EXPECT_EQ(d.hminus1, 0.0);
        EXPECT_EQ(d.psi, 0.0);
    }
}

TEST(Run, LyapunovAndZeroModeLaw) {
    std::mt19937_64 rng(2);
    const VladimirovOperator op(BallGrid(3, 0, 2), 0.5);
    for (double m : {0.5, 1.0, 2.0, 3.0}) {
        const PowerLaw nl(m);
        SolverConfig cfg;
        cfg.tau = 0.05;
        cfg.horizon = 0.5;
        const auto traj = run(random_real(op.grid(), rng), cfg, op, nl);
        ASSERT_TRUE(traj.complete());
        for (std::size_t n = 1; n < traj.states.size(); ++n) {
            EXPECT_LE(traj.diagnostics[n].psi, traj.diagnostics[n - 1].psi + 1e-10);
            EXPECT_LE(traj.diagnostics[n].hminus1, traj.diagnostics[n - 1].hminus1 + 1e-10);
            const Complex jump = traj.diagnostics[n].zero_mode - traj.diagnostics[n - 1].zero_mode;
            const Complex law = -cfg.tau * op.lambda0() * forward(apply_phi(traj.states[n], nl))[0];
            EXPECT_NEAR(std::abs(jump - law), 0.0, 1e-10);
        }
        EXPECT_GE(traj.regularity.sup_t_phi, 0.0);
        EXPECT_GE(traj.regularity.sup_t_dtu, 0.0);
    }
}

TEST(Run, SemigroupIsDeterministic) {
    std::mt19937_64 rng(3);
    const VladimirovOperator op(BallGrid(2, 1, 3), 0.5);
    const PowerLaw nl(2.0);
    const auto u0 = random_real(op.grid(), rng);
    SolverConfig whole;
    whole.tau = 0.1;
    whole.horizon = 0.5;
    SolverConfig first = whole;
    first.horizon = 0.2;
    SolverConfig second = whole;
    second.horizon = 0.3;
    const auto a = run(u0, whole, op, nl);
    const auto b1 = run(u0, first, op, nl);
    const auto b2 = run(b1.states.back(), second, op, nl);
    for (std::int64_t x = 0; x < u0.size(); ++x) EXPECT_EQ(a.states.back()[x], b2.states.back()[x]);
}

TEST(Run, UsesTheNonlinearityNotJustTheOperator) {
    std::mt19937_64 rng(4);
    const VladimirovOperator op(BallGrid(2, 0, 3), 0.5);
    const auto u0 = random_real(op.grid(), rng);
    SolverConfig cfg;
    cfg.horizon = 0.2;
    const auto a = run(u0, cfg, op, PowerLaw(1.0)).states.back();
    const auto b = run(u0, cfg, op, PowerLaw(2.0)).states.back();
    EXPECT_GT(max_abs_diff(a, b), 1e-3);
}

TEST(LinearExact, Examples) {
    std::mt19937_64 rng(5);
    const VladimirovOperator op(BallGrid(5, 0, 2), 0.5);
    const auto u0 = random_real(op.grid(), rng);
    EXPECT_LT(max_abs_diff(linear_exact(u0, 0.0, op), u0), 1e-13);
    const auto psi0 = eigenfunction_psi0(op.grid());
    auto expected = psi0;
    expected *= std::exp(-op.lambda0() * 0.7);
    EXPECT_LT(max_abs_diff(linear_exact(psi0, 0.7, op), expected), 1e-13);
    double last = l2_norm(u0);
    for (double t = 0.1; t < 2.0; t += 0.1) {
        const double n = l2_norm(linear_exact(u0, t, op));
        EXPECT_LE(n, last + 1e-14);
        last = n;
    }
}

TEST(LinearExact, ImplicitEulerConvergesAtFirstOrder) {
    std::mt19937_64 rng(6);
    const VladimirovOperator op(BallGrid(2, 0, 4), 0.5);
    const auto u0 = random_real(op.grid(), rng);
    const auto exact = linear_exact(u0, 1.0, op);
    std::vector<double> err;
    for (double tau : {0.1, 0.05, 0.025, 0.0125}) {
        SolverConfig cfg;
        cfg.tau = tau;
        err.push_back(max_abs_diff(run(u0, cfg, op, PowerLaw(1.0)).states.back(), exact));
    }
    for (std::size_t i = 1; i < err.size(); ++i) {
        const double order = std::log2(err[i - 1] / err[i]);
        EXPECT_GE(order, 0.8);
        EXPECT_LE(order, 1.2);
    }
}

TEST(Contraction, IdenticalPairsAndRandomPairs) {
    std::mt19937_64 rng(7);
    const VladimirovOperator op(BallGrid(3, 1, 1), 0.5);
    SolverConfig cfg;
    cfg.horizon = 0.3;
    for (double m : {0.5, 2.0}) {
        const PowerLaw nl(m);
        const auto u = random_real(op.grid(), rng);
        const auto same = contraction_gap(u, u, cfg, op, nl);
        EXPECT_LE(same.gap, 1e-9);
        for (int i = 0; i < 5; ++i) {
            const auto r = contraction_gap(random_real(op.grid(), rng), random_real(op.grid(), rng), cfg, op, nl);
            EXPECT_LE(r.gap, 1e-8);
            EXPECT_LT(r.dissipation_defect, 1e-8);
            for (std::size_t n = 1; n < r.distances.size(); ++n) EXPECT_LE(r.distances[n], r.distances[n - 1] + 1e-10);
        }
    }
}

TEST(Contraction, DissipationIdentityExposesAMismatchedNorm) {
    std::mt19937_64 rng(8);
    const BallGrid g(2, 0, 4);
    auto table = vladimirov_symbols(g, 0.5);
    for (std::size_t b = 1; b < table.size(); ++b) table[b] *= 1.01;
    const VladimirovOperator bad(g, 0.5, table);
    SolverConfig cfg;
    cfg.horizon = 0.2;
    const auto r = contraction_gap(random_real(g, rng), random_real(g, rng), cfg, bad, PowerLaw(2.0));
    EXPECT_GT(r.dissipation_defect, 1e-6);
}

TEST(WeakResidual, ZeroTrajectoryAndEndpointCheck) {
    const VladimirovOperator op(BallGrid(2, 0, 3), 0.5);
    SolverConfig cfg;
    cfg.tau = 0.1;
    const auto traj = run(GridFunction(op.grid()), cfg, op, PowerLaw(2.0));
    const auto zeta = eigenfunction_first_layer(op.grid(), 1);
    EXPECT_EQ(weak_residual(traj, TimeProfile::sine(1.0), zeta, op, PowerLaw(2.0)), 0.0);
    const TimeProfile constant{[](double) { return 1.0; }, [](double) { return 0.0; }};
    EXPECT_THROW(weak_residual(traj, constant, zeta, op, PowerLaw(2.0)), ConfigurationError);
}

TEST(WeakResidual, DecreasesUnderRefinement) {
    std::mt19937_64 rng(9);
    const VladimirovOperator op(BallGrid(3, 0, 2), 0.5);
    const auto u0 = random_real(op.grid(), rng);
    const auto zeta = random_real(op.grid(), rng);
    for (double m : {1.0, 2.0}) {
        const PowerLaw nl(m);
        double last = 1e300;
        for (double tau : {0.1, 0.05, 0.025}) {
            SolverConfig cfg;
            cfg.tau = tau;
            const double r = weak_residual(run(u0, cfg, op, nl), TimeProfile::sine(1.0), zeta, op, nl);
            EXPECT_LT(r, last);
            last = r;
        }
    }
}
