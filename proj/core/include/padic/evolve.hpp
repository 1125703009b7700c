#pragma once

#include "padic/harmonic.hpp"
#include "padic/monotone.hpp"
#include "padic/vladimirov.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace padic {

struct SolverConfig {
    double tau = 0.05;      ///< time step
    double horizon = 1.0;   ///< T; a final shorter step is taken when T / tau is not an integer
    ProxOptions prox{};
};

/// Times 0 = t_0 < t_1 < ... < t_n = T for the configuration.
std::vector<double> time_grid(const SolverConfig& cfg);

struct StepDiagnostics {
    double t = 0.0;
    double l2 = 0.0;
    double hminus1 = 0.0;
    double psi = 0.0;
    Complex zero_mode{};          ///< F_N u(0)
    double residual = 0.0;        ///< H_{-1} residual of the step equation (0 for the initial state)
    double constraint_gap = 0.0;
    int newton_iterations = 0;
};

/// sup_t t ||phi(u)||_{H_{-1}} and sup_t t ||D_t u||_{H_{-1}} along the discrete
/// trajectory. Reported only; nothing is asserted about them.
struct RegularityDiagnostics {
    double sup_t_phi = 0.0;
    double sup_t_dtu = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<GridFunction> states;
    std::vector<StepDiagnostics> diagnostics;
    RegularityDiagnostics regularity;
    /// Set when a step failed; the trajectory then stops at the last good state.
    std::optional<std::string> failure;

    bool complete() const noexcept { return !failure.has_value(); }
};

/// One implicit Euler step of D_t u + D phi(u) = 0.
GridFunction step(const GridFunction& state, const SolverConfig& cfg, const VladimirovOperator& op,
                  const PowerLaw& nl);

/// Implicit Euler over [0, T].
Trajectory run(const GridFunction& u0, const SolverConfig& cfg, const VladimirovOperator& op, const PowerLaw& nl);

/// Exact solution of the linear problem (m = 1): coefficients decay as exp(-symbol(b) t).
GridFunction linear_exact(const GridFunction& u0, double t, const VladimirovOperator& op);

struct ContractionResult {
    /// max_n [d_n - d_{n-1}], d_n = ||u_n - v_n||_{H_{-1}}; <= 0 for an exact contraction.
    double gap = 0.0;
    std::vector<double> distances;
    /// max_n of E_n = |d_{n-1}^2 - d_n^2 - 2 dt (phi(u_n) - phi(v_n), u_n - v_n) - dt^2 ||D(phi(u_n) - phi(v_n))||_{H_{-1}}^2|
    /// minus the bound 2 d_{n-1} rho_n + 3 rho_n^2 that the step residuals rho_n (sum over both
    /// trajectories) can produce, floored at 0 and divided by max(d_{n-1}^2, 1e-300). The step
    /// equation makes the identity exact, so this is round-off on correct operators; it exposes
    /// an H_{-1} norm that does not match the operator even when the contraction has slack.
    double dissipation_defect = 0.0;
};

ContractionResult contraction_gap(const GridFunction& u0, const GridFunction& v0, const SolverConfig& cfg,
                                  const VladimirovOperator& op, const PowerLaw& nl);

/// Separable test function theta(t) zeta(x); theta must vanish at 0 and T.
struct TimeProfile {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    /// sin(pi t / T).
    static TimeProfile sine(double horizon);
};

/// | int_0^T (u, zeta) theta' dt - int_0^T (phi(u), D zeta) theta dt | with trapezoidal
/// time quadrature and exact spatial sums. Throws ConfigurationError when theta does
/// not vanish at the ends of the trajectory.
double weak_residual(const Trajectory& traj, const TimeProfile& theta, const GridFunction& zeta,
                     const VladimirovOperator& op, const PowerLaw& nl);

}  // namespace padic
