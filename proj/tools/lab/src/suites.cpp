#include "padic_lab/suites.hpp"

#include "padic/errors.hpp"
#include "padic/evolve.hpp"
#include "padic/harmonic.hpp"
#include "padic/sobolev.hpp"
#include "padic_lab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace padic::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using json = nlohmann::ordered_json;

// JSON has no infinity; failures that never produced a number are reported as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::mt19937_64 suite_rng(const SuiteContext& ctx, int id, std::uint64_t sub = 0) {
    return make_rng(ctx.seed, static_cast<std::uint64_t>(id) * 1000 + sub);
}

SuiteResult start(int id) {
    SuiteResult r;
    r.id = id;
    r.name = suite_name(id);
    return r;
}

void finish(SuiteResult& r) {
    r.passed = !r.checks.empty() &&
               std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.passed; });
}

// Groups nonzero dual classes by log_p ||xi||.
std::map<int, std::vector<std::int64_t>> dual_shells(const BallGrid& g) {
    std::map<int, std::vector<std::int64_t>> shells;
    for (std::int64_t b = 1; b < g.size(); ++b) shells[*g.dual_norm_exponent({b})].push_back(b);
    return shells;
}

SuiteResult fourier(const SuiteContext& ctx) {
    auto r = start(1);
    const BallGrid g = faulted_grid(ctx);
    auto rng = suite_rng(ctx, 1);
    double roundtrip = 0.0;
    double deficit = 0.0;
    for (int i = 0; i < ctx.verify.samples; ++i) {
        const auto f = random_complex(g, rng);
        roundtrip = std::max(roundtrip, max_abs_diff(inverse(forward(f)), f));
        deficit = std::max(deficit, plancherel_deficit(f));
    }
    r.checks.push_back(make_check("max_roundtrip_error", roundtrip, "<=", 1e-12));
    r.checks.push_back(make_check("max_plancherel_deficit", deficit, "<=", 1e-12));
    r.details["samples"] = ctx.verify.samples;
    r.details["transform"] = g.size() > kFastTransformThreshold ? "fast" : "direct";
    return r;
}

SuiteResult diagonalization(const SuiteContext& ctx) {
    auto r = start(2);
    const BallGrid g = faulted_grid(ctx);
    const auto op = faulted_operator(g, ctx.alpha, ctx.fault);
    auto rng = suite_rng(ctx, 2);
    double gap = 0.0;
    for (int i = 0; i < ctx.verify.samples; ++i) {
        const auto f = random_complex(g, rng);
        gap = std::max(gap, max_abs_diff(op.apply_kernel(f), op.apply_spectral(f)));
    }
    r.checks.push_back(make_check("max_kernel_spectral_gap", gap, "<=", 1e-10));

    double spread = 0.0;
    double table_gap = 0.0;
    bool eigen = true;
    std::vector<double> brute(static_cast<std::size_t>(g.size()));
    for (std::int64_t b = 0; b < g.size(); ++b) {
        try {
            brute[static_cast<std::size_t>(b)] = brute_symbol(op, {b}).value;
        } catch (const NonEigenfunctionError&) {
            eigen = false;
            brute[static_cast<std::size_t>(b)] = std::numeric_limits<double>::quiet_NaN();
        }
        table_gap = std::max(table_gap, std::abs(brute[static_cast<std::size_t>(b)] - op.symbol({b})));
    }
    for (const auto& [k, members] : dual_shells(g)) {
        double lo = kInf;
        double hi = -kInf;
        for (auto b : members) {
            lo = std::min(lo, brute[static_cast<std::size_t>(b)]);
            hi = std::max(hi, brute[static_cast<std::size_t>(b)]);
        }
        spread = std::max(spread, hi - lo);
    }
    if (!eigen) {
        spread = kInf;
        table_gap = kInf;
    }
    r.checks.push_back(make_check("max_brute_symbol_shell_spread", spread, "<=", 1e-10));
    r.checks.push_back(make_check("max_brute_symbol_table_gap", table_gap, "<=", 1e-10));
    r.details["samples"] = ctx.verify.samples;
    return r;
}

SuiteResult symbol_arbitration(const SuiteContext& ctx) {
    auto r = start(3);
    const BallGrid g = faulted_grid(ctx);
    const auto op = faulted_operator(g, ctx.alpha, ctx.fault);
    const auto arb = arbitrate_symbol(op, 1e-10);
    r.checks.push_back(make_check("matching_candidates", static_cast<double>(arb.matching.size()), "==", 1.0));
    json gaps = json::object();
    for (std::size_t c = 0; c < kSymbolCandidates.size(); ++c) {
        gaps[to_string(kSymbolCandidates[c])] = num(arb.max_gap[c]);
    }
    r.details["max_gap"] = gaps;
    r.details["tolerance"] = arb.tolerance;
    r.details["matching"] = arb.decided() ? json(to_string(arb.matching.front())) : json(nullptr);
    return r;
}

SuiteResult eigenpairs(const SuiteContext& ctx) {
    auto r = start(4);
    const BallGrid g = faulted_grid(ctx);
    const auto op = faulted_operator(g, ctx.alpha, ctx.fault);
    std::vector<GridFunction> fs{eigenfunction_psi0(g)};
    std::vector<double> lambdas{op.lambda0()};
    for (int j = 1; j < g.prime(); ++j) {
        fs.push_back(eigenfunction_first_layer(g, j));
        lambdas.push_back(op.lambda1());
    }
    double eig = 0.0;
    double norm = 0.0;
    double orth = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        auto expected = fs[i];
        expected *= lambdas[i];
        eig = std::max(eig, max_abs_diff(op.apply_kernel(fs[i]), expected));
        norm = std::max(norm, std::abs(l2_norm(fs[i]) - 1.0));
        for (std::size_t k = 0; k < i; ++k) orth = std::max(orth, std::abs(l2_inner(fs[i], fs[k])));
    }
    r.checks.push_back(make_check("max_eigen_residual", eig, "<=", 1e-10));
    r.checks.push_back(make_check("max_unit_norm_defect", norm, "<=", 1e-12));
    r.checks.push_back(make_check("max_inner_product", orth, "<=", 1e-12));
    r.details["lambda0"] = op.lambda0();
    r.details["lambda1"] = op.lambda1();
    r.details["functions"] = fs.size();
    return r;
}

SuiteResult ags_identity(const SuiteContext& ctx) {
    auto r = start(5);
    const BallGrid g = faulted_grid(ctx);
    json per_order = json::array();
    double identity = 0.0;
    double lower = 0.0;   // max of C2 ||xi||^{2s} / A_s - 1, must be <= 0
    double upper = 0.0;   // max of A_s / (C1 ||xi||^{2s}) - 1
    double c2_tight = 0.0;
    double cells = 0.0;
    for (std::size_t si = 0; si < ctx.verify.sobolev_orders.size(); ++si) {
        const double s = ctx.verify.sobolev_orders[si];
        const auto table = faulted_ags_table(g, s, ctx.fault);
        auto rng = suite_rng(ctx, 5, si);
        double worst = 0.0;
        for (int i = 0; i < ctx.verify.samples; ++i) {
            const auto f = random_complex(g, rng);
            const double direct = ags_seminorm(f, s);
            worst = std::max(worst, std::abs(ags_via_multiplier(f, table) - direct) / direct);
        }
        identity = std::max(identity, worst);

        const auto c = equivalence_constants(g, s);
        const double c2 = 2.0 * std::pow(g.prime(), -2.0 * s);
        double min_ratio = kInf;
        double max_ratio = 0.0;
        for (std::int64_t b = 1; b < g.size(); ++b) {
            const double n = std::pow(g.dual_norm({b}), 2.0 * s);
            const double a = table[static_cast<std::size_t>(b)];
            lower = std::max(lower, c2 * n / a - 1.0);
            upper = std::max(upper, a / (c.c1 * n) - 1.0);
            min_ratio = std::min(min_ratio, a / n);
            max_ratio = std::max(max_ratio, a / n);
            const double by_cells = ags_multiplier_by_cells(g, s, {b});
            cells = std::max(cells, std::abs(by_cells - a) / a);
        }
        c2_tight = std::max(c2_tight, std::abs(c.c2 - c2) / c2 + std::abs(min_ratio - c2) / c2);
        per_order.push_back({{"s", s},
                             {"max_relative_identity_gap", num(worst)},
                             {"C1", c.c1},
                             {"C2", c.c2},
                             {"min_ratio", min_ratio},
                             {"max_ratio", max_ratio}});
    }
    r.checks.push_back(make_check("max_relative_identity_gap", identity, "<=", 1e-9));
    r.checks.push_back(make_check("sandwich_lower_excess", lower, "<=", 1e-12));
    r.checks.push_back(make_check("sandwich_upper_excess", upper, "<=", 1e-12));
    r.checks.push_back(make_check("c2_exactness", c2_tight, "<=", 1e-12));
    r.checks.push_back(make_check("max_relative_multiplier_cell_gap", cells, "<=", 1e-10));
    r.details["orders"] = per_order;
    r.details["samples"] = ctx.verify.samples;
    return r;
}

SuiteResult norm_equivalence(const SuiteContext& ctx) {
    auto r = start(6);
    const BallGrid g = faulted_grid(ctx);
    json per_order = json::array();
    double excursion = 0.0;
    for (std::size_t si = 0; si < ctx.verify.sobolev_orders.size(); ++si) {
        const double s = ctx.verify.sobolev_orders[si];
        const auto op = faulted_operator(g, s, ctx.fault);
        const auto env = certify_norm_equivalence(op);
        auto rng = suite_rng(ctx, 6, si);
        double worst = 0.0;
        auto track = [&](const RatioEnvelope& e, double ratio) {
            worst = std::max({worst, e.lower / ratio - 1.0, ratio / e.upper - 1.0});
        };
        for (int i = 0; i < ctx.verify.samples; ++i) {
            const auto n = squared_norms(random_complex(g, rng), op);
            track(env.h_alpha_over_ags, n.h_alpha / n.ags);
            track(env.ags_over_h1, n.ags / n.h1);
            track(env.h_alpha_over_h1, n.h_alpha / n.h1);
        }
        excursion = std::max(excursion, worst);
        auto pack = [](const RatioEnvelope& e) { return json{{"lower", e.lower}, {"upper", e.upper}}; };
        per_order.push_back({{"s", s},
                             {"h_alpha_over_ags", pack(env.h_alpha_over_ags)},
                             {"ags_over_h1", pack(env.ags_over_h1)},
                             {"h_alpha_over_h1", pack(env.h_alpha_over_h1)},
                             {"max_excursion", worst}});
    }
    // Excursion <= 0 means every ratio is inside its envelope; the slack absorbs round-off.
    r.checks.push_back(make_check("max_envelope_excursion", excursion, "<=", 1e-12));
    r.details["orders"] = per_order;
    r.details["samples"] = ctx.verify.samples;
    return r;
}

GridFunction linear_step(const VladimirovOperator& op, double tau, const GridFunction& f) {
    auto c = forward(f);
    for (std::int64_t b = 0; b < c.size(); ++b) c[b] /= 1.0 + tau * op.symbol({b});
    return inverse(c);
}

SuiteResult prox(const SuiteContext& ctx) {
    auto r = start(7);
    const BallGrid g = faulted_grid(ctx);
    const auto op = faulted_operator(g, ctx.alpha, ctx.fault);
    auto rng = suite_rng(ctx, 7);
    double residual = 0.0;
    double gap = 0.0;
    double linear = 0.0;
    int failures = 0;
    int solves = 0;
    json runs = json::array();
    for (double m : ctx.verify.prox_powers) {
        const PowerLaw nl(m);
        for (double tau : ctx.verify.prox_steps) {
            const ProxSolver solver(op, nl, tau, ctx.prox);
            for (double amplitude : {0.1, 1.0, 10.0}) {
                const auto f = random_real(g, rng, amplitude);
                ++solves;
                try {
                    const auto res = solver.solve(f);
                    residual = std::max(residual, res.residual_hminus1);
                    gap = std::max(gap, res.constraint_gap);
                    double lin = 0.0;
                    if (m == 1.0) {
                        lin = max_abs_diff(res.u, linear_step(op, tau, f));
                        linear = std::max(linear, lin);
                    }
                    runs.push_back({{"m", m},
                                    {"tau", tau},
                                    {"amplitude", amplitude},
                                    {"residual", res.residual_hminus1},
                                    {"constraint_gap", res.constraint_gap},
                                    {"newton_iterations", res.newton_iterations}});
                } catch (const ConvergenceError& e) {
                    ++failures;
                    runs.push_back({{"m", m}, {"tau", tau}, {"amplitude", amplitude}, {"error", e.what()}});
                }
            }
        }
    }
    if (failures > 0) residual = gap = kInf;
    r.checks.push_back(make_check("max_hminus1_residual", residual, "<", 1e-10));
    r.checks.push_back(make_check("max_constraint_gap", gap, "<", 1e-8));
    if (std::find(ctx.verify.prox_powers.begin(), ctx.verify.prox_powers.end(), 1.0) != ctx.verify.prox_powers.end()) {
        r.checks.push_back(make_check("max_linear_solve_gap", failures > 0 ? kInf : linear, "<=", 1e-10));
    }
    r.checks.push_back(make_check("solver_failures", failures, "==", 0.0));
    r.details["solves"] = solves;
    r.details["runs"] = runs;
    return r;
}

SuiteResult contraction(const SuiteContext& ctx) {
    auto r = start(8);
    const BallGrid g = faulted_grid(ctx);
    const auto op = faulted_operator(g, ctx.alpha, ctx.fault);
    SolverConfig cfg;
    cfg.tau = ctx.verify.contraction_tau;
    cfg.horizon = ctx.verify.contraction_horizon;
    cfg.prox = ctx.prox;
    double gap = -kInf;
    double defect = 0.0;
    int increases = 0;
    int failures = 0;
    json per_power = json::array();
    for (std::size_t mi = 0; mi < ctx.verify.contraction_powers.size(); ++mi) {
        const double m = ctx.verify.contraction_powers[mi];
        const PowerLaw nl(m);
        auto rng = suite_rng(ctx, 8, mi);
        double worst_gap = -kInf;
        double worst_defect = 0.0;
        for (int i = 0; i < ctx.verify.pairs; ++i) {
            const auto u0 = random_real(g, rng);
            const auto v0 = random_real(g, rng);
            try {
                const auto c = contraction_gap(u0, v0, cfg, op, nl);
                worst_gap = std::max(worst_gap, c.gap);
                worst_defect = std::max(worst_defect, c.dissipation_defect);
                for (std::size_t n = 1; n < c.distances.size(); ++n) {
                    if (c.distances[n] > c.distances[n - 1]) ++increases;
                }
            } catch (const ConvergenceError&) {
                ++failures;
            }
        }
        gap = std::max(gap, worst_gap);
        defect = std::max(defect, worst_defect);
        per_power.push_back({{"m", m}, {"max_gap", num(worst_gap)}, {"max_dissipation_defect", worst_defect}});
    }
    if (failures > 0) gap = defect = kInf;
    r.checks.push_back(make_check("max_contraction_gap", gap, "<=", 1e-8));
    r.checks.push_back(make_check("distance_increases", increases, "==", 0.0));
    r.checks.push_back(make_check("max_dissipation_identity_defect", defect, "<=", 1e-8));
    r.checks.push_back(make_check("solver_failures", failures, "==", 0.0));
    r.details["pairs"] = ctx.verify.pairs;
    r.details["tau"] = cfg.tau;
    r.details["horizon"] = cfg.horizon;
    r.details["powers"] = per_power;
    return r;
}

SuiteResult lyapunov(const SuiteContext& ctx) {
    auto r = start(9);
    const BallGrid g = faulted_grid(ctx);
    const auto op = faulted_operator(g, ctx.alpha, ctx.fault);
    SolverConfig cfg;
    cfg.tau = ctx.verify.contraction_tau;
    cfg.horizon = ctx.verify.contraction_horizon;
    cfg.prox = ctx.prox;
    std::vector<double> powers = ctx.verify.prox_powers;
    if (std::find(powers.begin(), powers.end(), ctx.m) == powers.end()) powers.push_back(ctx.m);

    double psi_rise = -kInf;
    double h_rise = -kInf;
    int failures = 0;
    int trajectories = 0;
    auto rng = suite_rng(ctx, 9);
    std::vector<GridFunction> starts{eigenfunction_psi0(g), random_real(g, rng), random_real(g, rng, 5.0)};
    {
        InitialSpec ind;
        ind.generator = "indicator";
        ind.radius = g.radius_exponent() - 1;
        starts.push_back(make_initial(ind, g, ctx.seed));
    }
    for (double m : powers) {
        const PowerLaw nl(m);
        for (const auto& u0 : starts) {
            ++trajectories;
            const auto traj = run(u0, cfg, op, nl);
            if (!traj.complete()) ++failures;
            for (std::size_t n = 1; n < traj.diagnostics.size(); ++n) {
                psi_rise = std::max(psi_rise, traj.diagnostics[n].psi - traj.diagnostics[n - 1].psi);
                h_rise = std::max(h_rise, traj.diagnostics[n].hminus1 - traj.diagnostics[n - 1].hminus1);
            }
        }
    }
    r.checks.push_back(make_check("max_psi_increase", psi_rise, "<=", 1e-10));
    r.checks.push_back(make_check("max_hminus1_increase", h_rise, "<=", 1e-10));
    r.checks.push_back(make_check("solver_failures", failures, "==", 0.0));
    r.details["trajectories"] = trajectories;
    r.details["tau"] = cfg.tau;
    r.details["horizon"] = cfg.horizon;
    return r;
}

SuiteResult convergence(const SuiteContext& ctx) {
    auto r = start(10);
    const BallGrid g = faulted_grid(ctx);
    const auto op = faulted_operator(g, ctx.alpha, ctx.fault);
    auto rng = suite_rng(ctx, 10);
    const auto u0 = random_real(g, rng);
    // Testing against the initial datum weights every mode of the residual by |u0^(b)|^2 >= 0,
    // so contributions of different modes cannot cancel.
    const auto& zeta = u0;
    const double T = ctx.verify.refinement_horizon;
    const auto exact = linear_exact(u0, T, op);
    const auto theta = TimeProfile::sine(T);
    const auto& taus = ctx.verify.refinement_steps;

    std::vector<double> err;
    std::map<double, std::vector<double>> weak;
    int failures = 0;
    for (double tau : taus) {
        SolverConfig cfg;
        cfg.tau = tau;
        cfg.horizon = T;
        cfg.prox = ctx.prox;
        for (double m : {1.0, 2.0}) {
            const PowerLaw nl(m);
            const auto traj = run(u0, cfg, op, nl);
            if (!traj.complete()) {
                ++failures;
                weak[m].push_back(kInf);
                if (m == 1.0) err.push_back(kInf);
                continue;
            }
            weak[m].push_back(weak_residual(traj, theta, zeta, op, nl));
            if (m == 1.0) err.push_back(max_abs_diff(traj.states.back(), exact));
        }
    }
    double min_order = kInf;
    double max_order = -kInf;
    json rows = json::array();
    for (std::size_t k = 0; k < taus.size(); ++k) {
        json row{{"tau", taus[k]}, {"error", num(err[k])}};
        if (k > 0) {
            const double order = std::log(err[k - 1] / err[k]) / std::log(taus[k - 1] / taus[k]);
            min_order = std::min(min_order, order);
            max_order = std::max(max_order, order);
            row["order"] = num(order);
        }
        row["weak_residual_m1"] = num(weak[1.0][k]);
        row["weak_residual_m2"] = num(weak[2.0][k]);
        rows.push_back(row);
    }
    if (failures > 0 || !std::isfinite(min_order)) {
        min_order = -kInf;
        max_order = kInf;
    }
    r.checks.push_back(make_check("min_observed_order", min_order, "in", 0.8, 1.2));
    r.checks.push_back(make_check("max_observed_order", max_order, "in", 0.8, 1.2));
    for (double m : {1.0, 2.0}) {
        double worst = 0.0;
        for (std::size_t k = 1; k < taus.size(); ++k) worst = std::max(worst, weak[m][k] / weak[m][k - 1]);
        if (failures > 0) worst = kInf;
        r.checks.push_back(make_check(m == 1.0 ? "max_weak_residual_ratio_m1" : "max_weak_residual_ratio_m2", worst, "<", 1.0));
    }
    r.checks.push_back(make_check("solver_failures", failures, "==", 0.0));
    r.details["horizon"] = T;
    r.details["refinement"] = rows;
    return r;
}

SuiteResult negative_controls(const SuiteContext& ctx) {
    auto r = start(11);
    const double scale = ctx.verify.fault_scale;
    json runs = json::array();
    for (const auto& [label, fault] : std::vector<std::pair<std::string, Fault>>{
             {"symbol", Fault{scale * ctx.fault.symbol_scale, ctx.fault.haar_scale}},
             {"haar", Fault{ctx.fault.symbol_scale, scale * ctx.fault.haar_scale}}}) {
        SuiteContext bad = ctx;
        bad.fault = fault;
        for (int id : {2, 5, 8}) {
            const auto res = run_suite(id, bad);
            r.checks.push_back(make_check(label + "_fault_detected_by_" + suite_name(id), res.passed ? 0.0 : 1.0, "==", 1.0));
            json failing = json::array();
            for (const auto& c : res.checks) {
                if (!c.passed) failing.push_back({{"name", c.name}, {"value", num(c.value)}, {"limit", c.limit}});
            }
            runs.push_back({{"fault", label}, {"suite", suite_name(id)}, {"failing_checks", failing}});
        }
    }
    r.details["fault_scale"] = scale;
    r.details["runs"] = runs;
    return r;
}

}  // namespace

std::string Fault::describe() const {
    std::ostringstream os;
    os << "symbol_scale=" << symbol_scale << ", haar_scale=" << haar_scale;
    return os.str();
}

Check make_check(std::string name, double value, std::string relation, double limit, double upper) {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.relation = std::move(relation);
    c.limit = limit;
    c.upper = upper;
    if (c.relation == "<=") c.passed = value <= limit;
    else if (c.relation == "<") c.passed = value < limit;
    else if (c.relation == ">=") c.passed = value >= limit;
    else if (c.relation == "==") c.passed = value == limit;
    else if (c.relation == "in") c.passed = value >= limit && value <= upper;
    else throw std::invalid_argument("unknown relation " + c.relation);
    return c;
}

SuiteContext SuiteContext::from_config(const ExperimentConfig& cfg) {
    SuiteContext ctx;
    ctx.grid = cfg.grid;
    ctx.alpha = cfg.alpha;
    ctx.m = cfg.m;
    ctx.verify = cfg.verify;
    ctx.prox = cfg.solver.prox;
    ctx.seed = cfg.seed;
    return ctx;
}

std::string suite_name(int id) {
    static const char* names[] = {"fourier",     "diagonalization", "symbol_arbitration", "eigenpairs",
                                  "ags_identity", "norm_equivalence", "prox_step",          "contraction",
                                  "lyapunov",    "convergence",     "negative_controls"};
    if (id < 1 || id > kSuiteCount) throw std::out_of_range("suite id " + std::to_string(id));
    return names[id - 1];
}

BallGrid faulted_grid(const SuiteContext& ctx) {
    BallGrid g(ctx.grid.p, ctx.grid.N, ctx.grid.K, ctx.grid.cell_cap);
    return ctx.fault.haar_scale == 1.0 ? g : g.with_haar_scale(ctx.fault.haar_scale);
}

VladimirovOperator faulted_operator(const BallGrid& grid, double alpha, const Fault& fault) {
    auto table = vladimirov_symbols(grid, alpha);
    for (std::size_t b = 1; b < table.size(); ++b) table[b] *= fault.symbol_scale;
    return VladimirovOperator(grid, alpha, std::move(table));
}

std::vector<double> faulted_ags_table(const BallGrid& grid, double s, const Fault& fault) {
    auto table = ags_multiplier_table(grid, s);
    for (std::size_t b = 1; b < table.size(); ++b) table[b] *= fault.symbol_scale;
    return table;
}

SuiteResult run_suite(int id, const SuiteContext& ctx) {
    SuiteResult r;
    switch (id) {
        case 1: r = fourier(ctx); break;
        case 2: r = diagonalization(ctx); break;
        case 3: r = symbol_arbitration(ctx); break;
        case 4: r = eigenpairs(ctx); break;
        case 5: r = ags_identity(ctx); break;
        case 6: r = norm_equivalence(ctx); break;
        case 7: r = prox(ctx); break;
        case 8: r = contraction(ctx); break;
        case 9: r = lyapunov(ctx); break;
        case 10: r = convergence(ctx); break;
        case 11: r = negative_controls(ctx); break;
        default: throw std::out_of_range("suite id " + std::to_string(id));
    }
    finish(r);
    return r;
}

nlohmann::ordered_json to_json(const Check& c) {
    json j{{"name", c.name}, {"value", num(c.value)}, {"relation", c.relation}, {"limit", c.limit}};
    if (c.relation == "in") j["upper"] = c.upper;
    j["passed"] = c.passed;
    return j;
}

nlohmann::ordered_json to_json(const SuiteResult& r, const SuiteContext& ctx) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    const BallGrid g(ctx.grid.p, ctx.grid.N, ctx.grid.K, ctx.grid.cell_cap);
    return json{{"id", r.id},
                {"name", r.name},
                {"grid", {{"p", ctx.grid.p}, {"N", ctx.grid.N}, {"K", ctx.grid.K}, {"M", g.size()}}},
                {"alpha", ctx.alpha},
                {"fault", {{"symbol_scale", ctx.fault.symbol_scale}, {"haar_scale", ctx.fault.haar_scale}}},
                {"passed", r.passed},
                {"checks", checks},
                {"details", r.details}};
}

}  // namespace padic::lab
