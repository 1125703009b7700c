#include "padic/evolve.hpp"

#include "padic/errors.hpp"
#include "padic/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>

namespace padic {

namespace {

StepDiagnostics measure(const GridFunction& u, double t, const VladimirovOperator& op, const PowerLaw& nl) {
    StepDiagnostics d;
    d.t = t;
    d.l2 = l2_norm(u);
    d.hminus1 = hminus1_norm(u, op);
    d.psi = psi_functional(u, nl);
    d.zero_mode = forward(u)[0];
    return d;
}

void require_real(const GridFunction& u, const char* what) {
    double scale = 1.0;
    for (const auto& z : u.values()) scale = std::max(scale, std::abs(z));
    if (u.max_imag() > 1e-12 * scale) throw std::invalid_argument(std::string(what) + " must be real-valued");
}

}  // namespace

std::vector<double> time_grid(const SolverConfig& cfg) {
    if (!(cfg.tau > 0.0)) throw ConfigurationError("time step tau must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigurationError("horizon T must be positive");
    const auto n = static_cast<std::int64_t>(std::floor(cfg.horizon / cfg.tau + 1e-9));
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(n + 2));
    for (std::int64_t k = 0; k <= n; ++k) t.push_back(static_cast<double>(k) * cfg.tau);
    if (cfg.horizon - t.back() > 1e-9 * cfg.horizon) {
        t.push_back(cfg.horizon);
    } else if (n > 0) {
        t.back() = cfg.horizon;
    }
    return t;
}

GridFunction step(const GridFunction& state, const SolverConfig& cfg, const VladimirovOperator& op,
                  const PowerLaw& nl) {
    require_real(state, "state");
    return prox_step(op, nl, cfg.tau, state, cfg.prox).u;
}

Trajectory run(const GridFunction& u0, const SolverConfig& cfg, const VladimirovOperator& op, const PowerLaw& nl) {
    require_real(u0, "initial condition");
    const auto times = time_grid(cfg);
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(u0);
    traj.diagnostics.push_back(measure(u0, 0.0, op, nl));

    // The last step may be shorter; keep one factorized solver per distinct step size.
    std::map<double, ProxSolver> solvers;
    for (std::size_t n = 1; n < times.size(); ++n) {
        const double dt = times[n] - times[n - 1];
        const double key = std::abs(dt - cfg.tau) <= 1e-12 * cfg.tau ? cfg.tau : dt;
        auto it = solvers.find(key);
        if (it == solvers.end()) it = solvers.emplace(key, ProxSolver(op, nl, key, cfg.prox)).first;
        std::optional<ProxResult> solved;
        try {
            solved = it->second.solve(traj.states.back());
        } catch (const ConvergenceError& e) {
            traj.failure = "step " + std::to_string(n) + " (t=" + std::to_string(times[n]) + "): " + e.what();
            break;
        }
        ProxResult& r = *solved;

        auto d = measure(r.u, times[n], op, nl);
        d.residual = r.residual_hminus1;
        d.constraint_gap = r.constraint_gap;
        d.newton_iterations = r.newton_iterations;

        const double t = times[n];
        traj.regularity.sup_t_phi = std::max(traj.regularity.sup_t_phi, t * hminus1_norm(apply_phi(r.u, nl), op));
        GridFunction dtu = r.u - traj.states.back();
        dtu *= Complex{1.0 / key, 0.0};
        traj.regularity.sup_t_dtu = std::max(traj.regularity.sup_t_dtu, t * hminus1_norm(dtu, op));

        traj.times.push_back(t);
        traj.states.push_back(std::move(r.u));
        traj.diagnostics.push_back(d);
    }
    return traj;
}

GridFunction linear_exact(const GridFunction& u0, double t, const VladimirovOperator& op) {
    if (t < 0.0) throw ConfigurationError("linear_exact: t must be non-negative");
    auto c = forward(u0);
    for (std::int64_t b = 0; b < c.size(); ++b) c[b] *= std::exp(-op.symbol({b}) * t);
    return inverse(c);
}

ContractionResult contraction_gap(const GridFunction& u0, const GridFunction& v0, const SolverConfig& cfg,
                                  const VladimirovOperator& op, const PowerLaw& nl) {
    const auto tu = run(u0, cfg, op, nl);
    const auto tv = run(v0, cfg, op, nl);
    if (!tu.complete()) throw ConvergenceError(*tu.failure, {});
    if (!tv.complete()) throw ConvergenceError(*tv.failure, {});
    ContractionResult out;
    out.gap = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < tu.states.size(); ++n) {
        const GridFunction du = tu.states[n] - tv.states[n];
        out.distances.push_back(hminus1_norm(du, op));
        if (n == 0) continue;
        out.gap = std::max(out.gap, out.distances[n] - out.distances[n - 1]);

        const double dt = tu.times[n] - tu.times[n - 1];
        const GridFunction dphi = apply_phi(tu.states[n], nl) - apply_phi(tv.states[n], nl);
        const double d_dphi = hminus1_norm(op.apply_kernel(dphi), op);
        const double before = out.distances[n - 1] * out.distances[n - 1];
        const double after = out.distances[n] * out.distances[n];
        const double dissipated = 2.0 * dt * l2_inner(dphi, du).real() + dt * dt * d_dphi * d_dphi;
        // Step residuals r_u, r_v perturb the identity by at most 2 d_{n-1} rho + 3 rho^2,
        // rho = ||r_u|| + ||r_v||; only the part they cannot explain counts.
        const double rho = tu.diagnostics[n].residual + tv.diagnostics[n].residual;
        const double allowed = 2.0 * out.distances[n - 1] * rho + 3.0 * rho * rho;
        const double excess = std::max(0.0, std::abs(before - after - dissipated) - allowed);
        out.dissipation_defect = std::max(out.dissipation_defect, excess / std::max(before, 1e-300));
    }
    if (out.distances.size() < 2) out.gap = 0.0;
    return out;
}

TimeProfile TimeProfile::sine(double horizon) {
    const double k = std::numbers::pi / horizon;
    return {[k](double t) { return std::sin(k * t); }, [k](double t) { return k * std::cos(k * t); }};
}

double weak_residual(const Trajectory& traj, const TimeProfile& theta, const GridFunction& zeta,
                     const VladimirovOperator& op, const PowerLaw& nl) {
    if (traj.times.empty()) return 0.0;
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    if (std::abs(theta.value(t0)) > 1e-12 || std::abs(theta.value(t1)) > 1e-12) {
        throw ConfigurationError("weak_residual: theta must vanish at both ends of the time interval");
    }
    const auto d_zeta = op.apply_kernel(zeta);
    std::vector<double> integrand(traj.times.size());
    for (std::size_t n = 0; n < traj.times.size(); ++n) {
        const double t = traj.times[n];
        const auto& u = traj.states[n];
        const double lhs = l2_inner(u, zeta).real() * theta.derivative(t);
        const double rhs = l2_inner(apply_phi(u, nl), d_zeta).real() * theta.value(t);
        integrand[n] = lhs - rhs;
    }
    double acc = 0.0;
    for (std::size_t n = 1; n < integrand.size(); ++n) {
        acc += 0.5 * (traj.times[n] - traj.times[n - 1]) * (integrand[n] + integrand[n - 1]);
    }
    return std::abs(acc);
}

}  // namespace padic
