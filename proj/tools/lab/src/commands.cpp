#include "padic_lab/commands.hpp"

#include "padic/errors.hpp"
#include "padic/evolve.hpp"
#include "padic/sobolev.hpp"
#include "padic_lab/generators.hpp"
#include "padic_lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

namespace padic::lab {

namespace {

using json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// State shared by every command: the resolved configuration, the output directory
/// and the report under construction.
struct Run {
    const CommandOptions& options;
    ExperimentConfig cfg;
    std::ostream& out;
    std::ostream& err;
    json report;
    std::vector<Check> checks;
    std::vector<std::string> files;
    bool non_convergence = false;

    void say(const std::string& line) const {
        if (!options.quiet) out << line << '\n';
    }

    void write(const std::string& name, const CsvTable& table) {
        table.write(options.out / name);
        files.push_back(name);
    }

    BallGrid grid() const {
        SuiteContext ctx = SuiteContext::from_config(cfg);
        ctx.fault = options.fault;
        return faulted_grid(ctx);
    }

    VladimirovOperator op(const BallGrid& g) const { return faulted_operator(g, cfg.alpha, options.fault); }

    SuiteContext context() const {
        SuiteContext ctx = SuiteContext::from_config(cfg);
        ctx.fault = options.fault;
        return ctx;
    }
};

std::string describe(const Check& c) {
    std::string s = c.name + " = " + (std::isfinite(c.value) ? format_number(c.value) : "n/a") + " (required " +
                    c.relation + " " + format_number(c.limit);
    if (c.relation == "in") s += ".." + format_number(c.upper);
    return s + ")";
}

json grid_json(const BallGrid& g) {
    return {{"p", g.prime()},
            {"N", g.radius_exponent()},
            {"K", g.resolution_exponent()},
            {"M", g.size()},
            {"haar_weight", g.haar_weight()},
            {"measure", g.measure()}};
}

int finish_suite_checks(const std::vector<SuiteResult>& suites, bool& non_convergence) {
    bool failed = false;
    for (const auto& s : suites) {
        for (const auto& c : s.checks) {
            if (c.passed) continue;
            failed = true;
            if (c.name == "solver_failures") non_convergence = true;
        }
    }
    return failed ? kExitVerificationFailure : kExitPass;
}

void grid_info(Run& run) {
    const BallGrid g = run.grid();
    const auto op = run.op(g);
    json shells = json::array();
    shells.push_back({{"abs_exponent", nullptr}, {"abs", 0.0}, {"cells", 1}});
    std::int64_t total = 1;
    for (int k = 1 - g.resolution_exponent(); k <= g.radius_exponent(); ++k) {
        const auto n = static_cast<std::int64_t>(g.shell_by_exponent(k).size());
        total += n;
        shells.push_back({{"abs_exponent", k}, {"abs", pow_p(g.prime(), k)}, {"cells", n}});
    }
    std::map<int, std::int64_t> hist;
    for (std::int64_t b = 1; b < g.size(); ++b) ++hist[*g.dual_norm_exponent({b})];
    json duals = json::array();
    duals.push_back({{"norm_exponent", nullptr}, {"norm", 0.0}, {"classes", 1}});
    std::int64_t dual_total = 1;
    for (const auto& [k, n] : hist) {
        dual_total += n;
        duals.push_back({{"norm_exponent", k}, {"norm", pow_p(g.prime(), k)}, {"classes", n}});
    }
    run.checks.push_back(make_check("shell_census_total", static_cast<double>(total), "==", static_cast<double>(g.size())));
    run.checks.push_back(
        make_check("dual_histogram_total", static_cast<double>(dual_total), "==", static_cast<double>(g.size())));

    CsvTable cells({"index", "abs", "dual_norm", "symbol"});
    for (std::int64_t a = 0; a < g.size(); ++a) {
        cells.row({cell(a), cell(g.point_abs({a})), cell(g.dual_norm({a})), cell(op.symbol({a}))});
    }
    run.write("cells.csv", cells);

    run.report["results"] = {{"grid", grid_json(g)},
                             {"alpha", op.alpha()},
                             {"lambda0", op.lambda0()},
                             {"lambda1", op.lambda1()},
                             {"kernel_constant", op.kernel_constant()},
                             {"shell_census", shells},
                             {"dual_norm_histogram", duals}};
    run.say("M = " + std::to_string(g.size()) + ", lambda0 = " + format_number(op.lambda0()));
    for (const auto& s : shells) {
        run.say("  |x| = " + format_number(s["abs"].get<double>()) + ": " + std::to_string(s["cells"].get<std::int64_t>()) +
                " cells");
    }
}

void symbol_verify(Run& run) {
    const BallGrid g = run.grid();
    const auto op = run.op(g);
    const auto arb = arbitrate_symbol(op, 1e-10);
    CsvTable table({"b", "dual_norm", "brute", "table", "eigenvalue_ladder", "unit_prefactor", "ball_prefactor",
                    "gap_eigenvalue_ladder", "gap_unit_prefactor", "gap_ball_prefactor"});
    double table_gap = 0.0;
    double trivial_gap = 0.0;
    for (const auto& row : arb.rows) {
        const double tab = op.symbol({row.b});
        table_gap = std::max(table_gap, std::abs(row.brute - tab));
        if (row.b == 0) trivial_gap = std::abs(row.brute - op.lambda0());
        table.row({cell(row.b), cell(row.dual_norm), cell(row.brute), cell(tab), cell(row.candidate[0]),
                   cell(row.candidate[1]), cell(row.candidate[2]), cell(row.gap[0]), cell(row.gap[1]), cell(row.gap[2])});
    }
    run.write("symbols.csv", table);
    run.checks.push_back(make_check("matching_candidates", static_cast<double>(arb.matching.size()), "==", 1.0));
    run.checks.push_back(make_check("trivial_class_gap", trivial_gap, "<=", 1e-12));
    run.checks.push_back(make_check("max_brute_symbol_table_gap", table_gap, "<=", 1e-10));

    json gaps = json::object();
    for (std::size_t c = 0; c < kSymbolCandidates.size(); ++c) gaps[to_string(kSymbolCandidates[c])] = arb.max_gap[c];
    json matching = json::array();
    for (auto c : arb.matching) matching.push_back(to_string(c));
    run.report["results"] = {{"grid", grid_json(g)},
                             {"alpha", op.alpha()},
                             {"lambda0", op.lambda0()},
                             {"tolerance", arb.tolerance},
                             {"max_gap", gaps},
                             {"matching", matching},
                             {"decided", arb.decided()}};
    run.say(arb.decided() ? "matching candidate: " + to_string(arb.matching.front())
                          : "candidates matching: " + std::to_string(arb.matching.size()));
}

void norms(Run& run) {
    const BallGrid g = run.grid();
    const auto op = run.op(g);
    const auto f = make_initial(run.cfg.initial, g, run.cfg.seed, run.cfg.base_dir);
    const PowerLaw nl(run.cfg.m);
    const double l2 = l2_norm(f);

    CsvTable table({"s", "h_s", "ags_direct", "ags_multiplier", "relative_gap", "c1", "c2", "c2_closed_form"});
    json orders = json::array();
    double worst_gap = 0.0;
    double worst_c2 = 0.0;
    for (double s : run.cfg.verify.sobolev_orders) {
        const double direct = ags_seminorm(f, s);
        const double via = ags_via_multiplier(f, faulted_ags_table(g, s, run.options.fault));
        // Relative to the seminorm, or to the L2 norm when the seminorm vanishes (constants).
        const double scale = direct > 0.0 ? direct : std::max(l2, std::numeric_limits<double>::min());
        const double gap = std::abs(direct - via) / scale;
        const auto c = equivalence_constants(g, s);
        const double c2_closed = 2.0 * std::pow(g.prime(), -2.0 * s);
        worst_gap = std::max(worst_gap, gap);
        worst_c2 = std::max(worst_c2, std::abs(c.c2 - c2_closed) / c2_closed);
        const double hs = h_alpha_norm(f, s);
        table.row({cell(s), cell(hs), cell(direct), cell(via), cell(gap), cell(c.c1), cell(c.c2), cell(c2_closed)});
        orders.push_back({{"s", s},
                          {"h_s", hs},
                          {"ags_direct", direct},
                          {"ags_multiplier", via},
                          {"relative_gap", gap},
                          {"c1", c.c1},
                          {"c2", c.c2}});
    }
    run.write("norms.csv", table);
    run.checks.push_back(make_check("max_ags_identity_relative_gap", worst_gap, "<=", 1e-9));
    run.checks.push_back(make_check("max_c2_closed_form_gap", worst_c2, "<=", 1e-12));

    json results{{"grid", grid_json(g)},
                 {"alpha", op.alpha()},
                 {"function", {{"generator", run.cfg.initial.generator}, {"amplitude", run.cfg.initial.amplitude}}},
                 {"l2", l2},
                 {"h_alpha", h_alpha_norm(f, op.alpha())},
                 {"h1", h1_norm(f, op)},
                 {"hminus1", hminus1_norm(f, op)},
                 {"h1_full", h1_full_norm(f, op)},
                 {"hminus1_full", hminus1_full_norm(f, op)},
                 {"psi", psi_functional(f, nl)},
                 {"orders", orders}};
    if (op.alpha() > 0.0 && op.alpha() < 1.0) {
        const auto env = certify_norm_equivalence(op);
        const auto sq = squared_norms(f, op);
        auto pack = [](const RatioEnvelope& e, double num_sq, double den_sq) {
            return json{{"lower", e.lower}, {"upper", e.upper}, {"ratio", den_sq > 0.0 ? json(num_sq / den_sq) : json(nullptr)}};
        };
        results["equivalence"] = {{"h_alpha_over_ags", pack(env.h_alpha_over_ags, sq.h_alpha, sq.ags)},
                                  {"ags_over_h1", pack(env.ags_over_h1, sq.ags, sq.h1)},
                                  {"h_alpha_over_h1", pack(env.h_alpha_over_h1, sq.h_alpha, sq.h1)}};
    }
    run.report["results"] = results;
    run.say("L2 = " + format_number(l2) + ", H_-1 = " + format_number(hminus1_norm(f, op)));
}

void solve(Run& run) {
    const BallGrid g = run.grid();
    const auto op = run.op(g);
    const PowerLaw nl(run.cfg.m);
    const auto u0 = make_initial(run.cfg.initial, g, run.cfg.seed, run.cfg.base_dir);
    const auto traj = padic::run(u0, run.cfg.solver, op, nl);

    CsvTable table({"t", "l2", "hminus1", "psi", "zero_mode_re", "zero_mode_im", "newton_iters", "residual"});
    double psi_rise = -kInf;
    double h_rise = -kInf;
    double residual = 0.0;
    for (std::size_t n = 0; n < traj.diagnostics.size(); ++n) {
        const auto& d = traj.diagnostics[n];
        table.row({cell(d.t), cell(d.l2), cell(d.hminus1), cell(d.psi), cell(d.zero_mode.real()), cell(d.zero_mode.imag()),
                   cell(d.newton_iterations), cell(d.residual)});
        residual = std::max(residual, d.residual);
        if (n > 0) {
            psi_rise = std::max(psi_rise, d.psi - traj.diagnostics[n - 1].psi);
            h_rise = std::max(h_rise, d.hminus1 - traj.diagnostics[n - 1].hminus1);
        }
    }
    run.write("trajectory.csv", table);
    CsvTable state({"index", "value"});
    const auto& last = traj.states.back();
    for (std::int64_t a = 0; a < g.size(); ++a) state.row({cell(a), cell(last[a].real())});
    run.write("final_state.csv", state);

    if (traj.diagnostics.size() < 2) psi_rise = h_rise = 0.0;
    run.checks.push_back(make_check("max_psi_increase", psi_rise, "<=", 1e-10));
    run.checks.push_back(make_check("max_hminus1_increase", h_rise, "<=", 1e-10));
    run.checks.push_back(make_check("max_step_residual", residual, "<=", run.cfg.solver.prox.tolerance));
    run.checks.push_back(make_check("completed", traj.complete() ? 1.0 : 0.0, "==", 1.0));
    run.non_convergence = !traj.complete();

    const auto& end = traj.diagnostics.back();
    run.report["results"] = {{"grid", grid_json(g)},
                             {"alpha", op.alpha()},
                             {"m", nl.exponent()},
                             {"tau", run.cfg.solver.tau},
                             {"horizon", run.cfg.solver.horizon},
                             {"steps", traj.times.size() - 1},
                             {"completed", traj.complete()},
                             {"failure", traj.failure ? json(*traj.failure) : json(nullptr)},
                             {"final",
                              {{"t", end.t},
                               {"l2", end.l2},
                               {"hminus1", end.hminus1},
                               {"psi", end.psi},
                               {"zero_mode_re", end.zero_mode.real()},
                               {"zero_mode_im", end.zero_mode.imag()}}},
                             {"regularity",
                              {{"sup_t_phi_hminus1", traj.regularity.sup_t_phi},
                               {"sup_t_dtu_hminus1", traj.regularity.sup_t_dtu}}}};
    if (traj.failure) run.err << "solver failure: " << *traj.failure << '\n';
    run.say("t = " + format_number(end.t) + ", H_-1 = " + format_number(end.hminus1) + ", Psi = " +
            format_number(end.psi));
}

void contraction(Run& run) {
    const BallGrid g = run.grid();
    const auto op = run.op(g);
    const auto& v = run.cfg.verify;
    SolverConfig cfg;
    cfg.tau = v.contraction_tau;
    cfg.horizon = v.contraction_horizon;
    cfg.prox = run.cfg.solver.prox;
    const auto times = time_grid(cfg);

    CsvTable table({"m", "pair", "step", "t", "distance"});
    double gap = -kInf;
    double defect = 0.0;
    int increases = 0;
    int failures = 0;
    json powers = json::array();
    for (std::size_t mi = 0; mi < v.contraction_powers.size(); ++mi) {
        const double m = v.contraction_powers[mi];
        const PowerLaw nl(m);
        auto rng = make_rng(run.cfg.seed, 8000 + mi);
        double worst_gap = -kInf;
        double worst_defect = 0.0;
        for (int i = 0; i < v.pairs; ++i) {
            const auto u0 = random_real(g, rng);
            const auto v0 = random_real(g, rng);
            try {
                const auto c = contraction_gap(u0, v0, cfg, op, nl);
                worst_gap = std::max(worst_gap, c.gap);
                worst_defect = std::max(worst_defect, c.dissipation_defect);
                for (std::size_t n = 0; n < c.distances.size(); ++n) {
                    if (n > 0 && c.distances[n] > c.distances[n - 1]) ++increases;
                    table.row({cell(m), cell(i), cell(n), cell(times[n]), cell(c.distances[n])});
                }
            } catch (const ConvergenceError& e) {
                ++failures;
                run.err << "solver failure (m=" << format_number(m) << ", pair " << i << "): " << e.what() << '\n';
            }
        }
        gap = std::max(gap, worst_gap);
        defect = std::max(defect, worst_defect);
        powers.push_back({{"m", m}, {"max_gap", num(worst_gap)}, {"max_dissipation_defect", worst_defect}});
    }
    run.write("contraction.csv", table);
    if (failures > 0) gap = defect = kInf;
    run.checks.push_back(make_check("max_contraction_gap", gap, "<=", 1e-8));
    run.checks.push_back(make_check("distance_increases", increases, "==", 0.0));
    run.checks.push_back(make_check("max_dissipation_identity_defect", defect, "<=", 1e-8));
    run.checks.push_back(make_check("solver_failures", failures, "==", 0.0));
    run.non_convergence = failures > 0;
    run.report["results"] = {{"grid", grid_json(g)},
                             {"alpha", op.alpha()},
                             {"tau", cfg.tau},
                             {"horizon", cfg.horizon},
                             {"pairs", v.pairs},
                             {"powers", powers}};
    run.say("max contraction gap = " + (std::isfinite(gap) ? format_number(gap) : std::string("n/a")));
}

void convergence(Run& run) {
    const auto ctx = run.context();
    const auto result = run_suite(10, ctx);
    CsvTable table({"tau", "error", "order", "weak_residual_m1", "weak_residual_m2"});
    auto field = [](const json& row, const char* key) {
        if (!row.contains(key) || row[key].is_null()) return std::string{};
        return format_number(row[key].get<double>());
    };
    for (const auto& row : result.details["refinement"]) {
        table.row({field(row, "tau"), field(row, "error"), field(row, "order"), field(row, "weak_residual_m1"),
                   field(row, "weak_residual_m2")});
    }
    run.write("convergence.csv", table);
    run.checks = result.checks;
    finish_suite_checks({result}, run.non_convergence);
    json results = result.details;
    results["grid"] = grid_json(faulted_grid(ctx));
    results["alpha"] = ctx.alpha;
    run.report["results"] = results;
    for (const auto& c : result.checks) run.say(describe(c));
}

void verify(Run& run) {
    const auto ctx = run.context();
    std::vector<SuiteResult> results;
    json suites = json::array();
    CsvTable table({"suite_id", "suite", "check", "value", "relation", "limit", "upper", "passed"});
    for (int id : run.cfg.verify.suites) {
        auto r = run_suite(id, ctx);
        run.say(std::string(r.passed ? "PASS" : "FAIL") + "  " + std::to_string(id) + " " + r.name);
        for (const auto& c : r.checks) {
            table.row({cell(id), r.name, c.name, cell(c.value), c.relation, cell(c.limit),
                       c.relation == "in" ? cell(c.upper) : std::string{}, cell(c.passed)});
            run.checks.push_back(c);
            run.checks.back().name = r.name + "." + c.name;
        }
        suites.push_back(to_json(r, ctx));
        results.push_back(std::move(r));
    }
    run.write("checks.csv", table);
    finish_suite_checks(results, run.non_convergence);
    run.report["results"] = {{"grid", grid_json(faulted_grid(ctx))}, {"alpha", ctx.alpha}, {"m", ctx.m}};
    run.report["suites"] = suites;

    std::vector<const SuiteResult*> failed;
    for (const auto& r : results) {
        if (!r.passed) failed.push_back(&r);
    }
    if (!failed.empty()) {
        run.err << "verification failed in " << failed.size() << " suite(s):\n";
        for (const auto* r : failed) {
            run.err << "  " << r->id << " " << r->name << '\n';
            for (const auto& c : r->checks) {
                if (!c.passed) run.err << "    " << describe(c) << '\n';
            }
        }
    }
}

const std::map<std::string, std::function<void(Run&)>>& table() {
    static const std::map<std::string, std::function<void(Run&)>> commands{
        {"grid-info", grid_info}, {"symbol-verify", symbol_verify}, {"norms", norms},     {"solve", solve},
        {"contraction", contraction}, {"convergence", convergence}, {"verify", verify}};
    return commands;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"grid-info", "symbol-verify", "norms", "solve",
                                                "contraction", "convergence", "verify"};
    return names;
}

int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    const auto it = table().find(options.command);
    if (it == table().end()) {
        err << "unknown command '" << options.command << "'\n";
        return kExitConfigError;
    }
    ExperimentConfig cfg;
    try {
        cfg = options.config ? load_config(*options.config) : default_config();
        if (options.seed) cfg.seed = *options.seed;
        // Grid validation (prime p, N + K >= 1, cell cap) already ran in the loader.
        std::filesystem::create_directories(options.out);
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "cannot create output directory: " << e.what() << '\n';
        return kExitConfigError;
    }

    Run run{options, cfg, out, err, report_envelope(options.command, cfg), {}, {}, false};
    run.report["fault"] = {{"active", options.fault.active()},
                           {"symbol_scale", options.fault.symbol_scale},
                           {"haar_scale", options.fault.haar_scale}};
    try {
        it->second(run);
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    }

    const bool passed = std::all_of(run.checks.begin(), run.checks.end(), [](const Check& c) { return c.passed; });
    int code = kExitPass;
    if (run.non_convergence) {
        code = kExitNonConvergence;
    } else if (!passed) {
        code = kExitVerificationFailure;
    }
    json checks = json::array();
    for (const auto& c : run.checks) checks.push_back(to_json(c));
    run.report["status"] = code == kExitPass ? "pass" : code == kExitNonConvergence ? "non_convergence" : "fail";
    run.report["exit_code"] = code;
    run.report["checks"] = checks;
    run.report["files"] = run.files;
    // Keep a fixed key order: move results and suites after the summary fields.
    for (const char* key : {"results", "suites"}) {
        if (run.report.contains(key)) {
            json moved = run.report[key];
            run.report.erase(key);
            run.report[key] = std::move(moved);
        }
    }
    write_json(options.out / "report.json", run.report);
    if (!options.quiet) {
        out << run.report["status"].get<std::string>() << ": " << (options.out / "report.json").string() << '\n';
    }
    return code;
}

}  // namespace padic::lab
