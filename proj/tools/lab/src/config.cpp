#include "padic_lab/config.hpp"

#include "padic/errors.hpp"
#include "padic/vladimirov.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace padic::lab {

namespace {

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const toml::source_region& where, const std::string& message) const {
        std::ostringstream os;
        os << source_ << ":" << where.begin.line << ":" << where.begin.column << ": " << message;
        throw ConfigurationError(os.str());
    }
    [[noreturn]] void fail(const toml::node& node, const std::string& message) const { fail(node.source(), message); }

    void only_keys(const toml::table& t, const std::string& where, std::initializer_list<std::string_view> allowed) const {
        for (auto&& [k, v] : t) {
            if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end()) {
                fail(k.source(), "unknown key '" + std::string(k.str()) + "' in " + where);
            }
        }
    }

    const toml::table* table(const toml::table& parent, std::string_view key) const {
        const toml::node* n = parent.get(key);
        if (!n) return nullptr;
        if (!n->is_table()) fail(*n, std::string(key) + " must be a table");
        return n->as_table();
    }

    const toml::node* integer(const toml::table& t, std::string_view key, std::int64_t& out) const {
        const toml::node* n = t.get(key);
        if (!n) return nullptr;
        if (!n->is_integer()) fail(*n, std::string(key) + " must be an integer");
        out = n->as_integer()->get();
        return n;
    }

    const toml::node* integer(const toml::table& t, std::string_view key, int& out) const {
        std::int64_t v = out;
        const toml::node* n = integer(t, key, v);
        if (n && (v < -(1 << 30) || v > (1 << 30))) fail(*n, std::string(key) + " is out of range");
        out = static_cast<int>(v);
        return n;
    }

    const toml::node* number(const toml::table& t, std::string_view key, double& out) const {
        const toml::node* n = t.get(key);
        if (!n) return nullptr;
        if (!n->is_number()) fail(*n, std::string(key) + " must be a number");
        out = *n->value<double>();
        return n;
    }

    const toml::node* string(const toml::table& t, std::string_view key, std::string& out) const {
        const toml::node* n = t.get(key);
        if (!n) return nullptr;
        if (!n->is_string()) fail(*n, std::string(key) + " must be a string");
        out = n->as_string()->get();
        return n;
    }

    const toml::node* numbers(const toml::table& t, std::string_view key, std::vector<double>& out) const {
        const toml::node* n = t.get(key);
        if (!n) return nullptr;
        if (!n->is_array()) fail(*n, std::string(key) + " must be an array of numbers");
        std::vector<double> values;
        for (const auto& e : *n->as_array()) {
            if (!e.is_number()) fail(e, std::string(key) + " must contain only numbers");
            values.push_back(*e.value<double>());
        }
        if (values.empty()) fail(*n, std::string(key) + " must not be empty");
        out = std::move(values);
        return n;
    }

    template <class Pred>
    void require(const toml::node* n, const toml::source_region& fallback, Pred ok, const std::string& message) const {
        if (!ok()) fail(n ? n->source() : fallback, message);
    }

private:
    std::string source_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

ExperimentConfig build(const toml::table& root, const std::string& source) {
    const Reader r(source);
    ExperimentConfig cfg = default_config();
    r.only_keys(root, "the top level", {"seed", "grid", "operator", "nonlinearity", "solver", "initial", "verify"});

    std::int64_t seed = static_cast<std::int64_t>(cfg.seed);
    if (const auto* n = r.integer(root, "seed", seed); n && seed < 0) r.fail(*n, "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);

    if (const auto* g = r.table(root, "grid")) {
        r.only_keys(*g, "[grid]", {"p", "N", "K", "cell_cap"});
        const auto* np = r.integer(*g, "p", cfg.grid.p);
        r.integer(*g, "N", cfg.grid.N);
        const auto* nk = r.integer(*g, "K", cfg.grid.K);
        const auto* ncap = r.integer(*g, "cell_cap", cfg.grid.cell_cap);
        r.require(np, g->source(), [&] { return is_prime(cfg.grid.p); },
                  "p must be prime (got " + std::to_string(cfg.grid.p) + ")");
        r.require(nk, g->source(), [&] { return cfg.grid.N + cfg.grid.K >= 1; },
                  "N + K must be >= 1 (got N=" + std::to_string(cfg.grid.N) + ", K=" + std::to_string(cfg.grid.K) + ")");
        r.require(ncap, g->source(), [&] { return cfg.grid.cell_cap >= 1; }, "cell_cap must be positive");
        try {
            BallGrid(cfg.grid.p, cfg.grid.N, cfg.grid.K, cfg.grid.cell_cap);
        } catch (const ConfigurationError& e) {
            r.fail(nk ? nk->source() : g->source(), e.what());
        }
    }

    if (const auto* o = r.table(root, "operator")) {
        r.only_keys(*o, "[operator]", {"alpha"});
        const auto* n = r.number(*o, "alpha", cfg.alpha);
        r.require(n, o->source(), [&] { return cfg.alpha > 0.0 && std::isfinite(cfg.alpha); },
                  "alpha must be positive (got " + fmt(cfg.alpha) + ")");
    }

    if (const auto* nl = r.table(root, "nonlinearity")) {
        r.only_keys(*nl, "[nonlinearity]", {"m"});
        const auto* n = r.number(*nl, "m", cfg.m);
        r.require(n, nl->source(), [&] { return cfg.m > 0.0 && std::isfinite(cfg.m); },
                  "m must be positive (got " + fmt(cfg.m) + ")");
    }

    if (const auto* s = r.table(root, "solver")) {
        r.only_keys(*s, "[solver]", {"tau", "horizon", "prox"});
        const auto* nt = r.number(*s, "tau", cfg.solver.tau);
        const auto* nh = r.number(*s, "horizon", cfg.solver.horizon);
        r.require(nt, s->source(), [&] { return cfg.solver.tau > 0.0; }, "tau must be positive (got " + fmt(cfg.solver.tau) + ")");
        r.require(nh, s->source(), [&] { return cfg.solver.horizon > 0.0; },
                  "horizon must be positive (got " + fmt(cfg.solver.horizon) + ")");
        if (const auto* p = r.table(*s, "prox")) {
            auto& o = cfg.solver.prox;
            r.only_keys(*p, "[solver.prox]", {"tolerance", "mu_initial", "mu_factor", "mu_final", "stage_tolerance",
                                              "max_newton_per_stage", "max_halvings", "armijo"});
            const auto* ntol = r.number(*p, "tolerance", o.tolerance);
            const auto* nmi = r.number(*p, "mu_initial", o.mu_initial);
            const auto* nmf = r.number(*p, "mu_factor", o.mu_factor);
            const auto* nml = r.number(*p, "mu_final", o.mu_final);
            const auto* nst = r.number(*p, "stage_tolerance", o.stage_tolerance);
            const auto* nnw = r.integer(*p, "max_newton_per_stage", o.max_newton_per_stage);
            const auto* nhv = r.integer(*p, "max_halvings", o.max_halvings);
            const auto* nar = r.number(*p, "armijo", o.armijo);
            r.require(ntol, p->source(), [&] { return o.tolerance > 0.0; }, "tolerance must be positive");
            r.require(nmi, p->source(), [&] { return o.mu_initial > 0.0; }, "mu_initial must be positive");
            r.require(nmf, p->source(), [&] { return o.mu_factor > 0.0 && o.mu_factor < 1.0; }, "mu_factor must lie in (0, 1)");
            r.require(nml, p->source(), [&] { return o.mu_final > 0.0 && o.mu_final <= o.mu_initial; },
                      "mu_final must lie in (0, mu_initial]");
            r.require(nst, p->source(), [&] { return o.stage_tolerance > 0.0; }, "stage_tolerance must be positive");
            r.require(nnw, p->source(), [&] { return o.max_newton_per_stage >= 1; }, "max_newton_per_stage must be >= 1");
            r.require(nhv, p->source(), [&] { return o.max_halvings >= 0; }, "max_halvings must be >= 0");
            r.require(nar, p->source(), [&] { return o.armijo > 0.0 && o.armijo < 0.5; }, "armijo must lie in (0, 0.5)");
        }
    }

    if (const auto* i = r.table(root, "initial")) {
        auto& in = cfg.initial;
        r.only_keys(*i, "[initial]", {"generator", "amplitude", "radius", "path"});
        const auto* ng = r.string(*i, "generator", in.generator);
        r.number(*i, "amplitude", in.amplitude);
        const auto* nr = r.integer(*i, "radius", in.radius);
        const auto* npath = r.string(*i, "path", in.path);
        const BallGrid grid(cfg.grid.p, cfg.grid.N, cfg.grid.K, cfg.grid.cell_cap);
        const auto& gen = in.generator;
        if (gen.rfind("character:", 0) == 0) {
            const std::string tail = gen.substr(10);
            std::size_t used = 0;
            long long b = -1;
            try {
                b = std::stoll(tail, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            r.require(ng, i->source(), [&] { return used == tail.size() && !tail.empty(); },
                      "character generator needs an integer class, e.g. \"character:3\"");
            r.require(ng, i->source(), [&] { return b >= 0 && b < grid.size(); },
                      "character class must lie in [0, " + std::to_string(grid.size()) + ")");
        } else {
            const std::set<std::string> known{"psi0", "random", "indicator", "file"};
            r.require(ng, i->source(), [&] { return known.count(gen) > 0; },
                      "unknown generator '" + gen + "' (expected psi0, random, indicator, character:<b> or file)");
        }
        if (gen == "indicator") {
            r.require(nr, i->source(), [&] { return in.radius >= -cfg.grid.K && in.radius <= cfg.grid.N; },
                      "indicator radius must lie in [-K, N] = [" + std::to_string(-cfg.grid.K) + ", " +
                          std::to_string(cfg.grid.N) + "]");
        }
        if (gen == "file") {
            r.require(npath, i->source(), [&] { return !in.path.empty(); }, "file generator needs a path");
        }
    }

    if (const auto* v = r.table(root, "verify")) {
        auto& s = cfg.verify;
        r.only_keys(*v, "[verify]", {"samples", "pairs", "sobolev_orders", "prox_powers", "prox_steps",
                                     "contraction_powers", "contraction_tau", "contraction_horizon", "refinement_steps",
                                     "refinement_horizon", "fault_scale", "suites"});
        const auto* nsm = r.integer(*v, "samples", s.samples);
        const auto* npr = r.integer(*v, "pairs", s.pairs);
        const auto* nso = r.numbers(*v, "sobolev_orders", s.sobolev_orders);
        const auto* npp = r.numbers(*v, "prox_powers", s.prox_powers);
        const auto* nps = r.numbers(*v, "prox_steps", s.prox_steps);
        const auto* ncp = r.numbers(*v, "contraction_powers", s.contraction_powers);
        const auto* nct = r.number(*v, "contraction_tau", s.contraction_tau);
        const auto* nch = r.number(*v, "contraction_horizon", s.contraction_horizon);
        const auto* nrs = r.numbers(*v, "refinement_steps", s.refinement_steps);
        const auto* nrh = r.number(*v, "refinement_horizon", s.refinement_horizon);
        const auto* nfs = r.number(*v, "fault_scale", s.fault_scale);
        std::vector<double> suites;
        const auto* nsu = r.numbers(*v, "suites", suites);
        auto all = [](const std::vector<double>& xs, auto pred) { return std::all_of(xs.begin(), xs.end(), pred); };
        r.require(nsm, v->source(), [&] { return s.samples >= 1; }, "samples must be >= 1");
        r.require(npr, v->source(), [&] { return s.pairs >= 1; }, "pairs must be >= 1");
        r.require(nso, v->source(), [&] { return all(s.sobolev_orders, [](double x) { return x > 0 && x < 1; }); },
                  "sobolev_orders must lie in (0, 1)");
        r.require(npp, v->source(), [&] { return all(s.prox_powers, [](double x) { return x > 0; }); },
                  "prox_powers must be positive");
        r.require(nps, v->source(), [&] { return all(s.prox_steps, [](double x) { return x > 0; }); },
                  "prox_steps must be positive");
        r.require(ncp, v->source(), [&] { return all(s.contraction_powers, [](double x) { return x > 0; }); },
                  "contraction_powers must be positive");
        r.require(nct, v->source(), [&] { return s.contraction_tau > 0; }, "contraction_tau must be positive");
        r.require(nch, v->source(), [&] { return s.contraction_horizon > 0; }, "contraction_horizon must be positive");
        r.require(nrs, v->source(),
                  [&] {
                      if (s.refinement_steps.size() < 2) return false;
                      for (std::size_t k = 0; k < s.refinement_steps.size(); ++k) {
                          if (!(s.refinement_steps[k] > 0)) return false;
                          if (k > 0 && !(s.refinement_steps[k] < s.refinement_steps[k - 1])) return false;
                      }
                      return true;
                  },
                  "refinement_steps needs at least two positive, strictly decreasing steps");
        r.require(nrh, v->source(), [&] { return s.refinement_horizon > 0; }, "refinement_horizon must be positive");
        r.require(nfs, v->source(), [&] { return s.fault_scale > 0 && s.fault_scale != 1.0; },
                  "fault_scale must be positive and different from 1");
        if (nsu) {
            std::vector<int> ids;
            for (double x : suites) {
                const bool valid = x == std::floor(x) && x >= 1 && x <= kSuiteCount &&
                                   std::find(ids.begin(), ids.end(), static_cast<int>(x)) == ids.end();
                if (!valid) r.fail(*nsu, "suites must list distinct suite numbers from 1 to " + std::to_string(kSuiteCount));
                ids.push_back(static_cast<int>(x));
            }
            s.suites = std::move(ids);
        }
    }
    return cfg;
}

}  // namespace

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config(const std::string& text, const std::string& source_name) {
    toml::table root;
    try {
        root = toml::parse(text, source_name);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << source_name << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
        throw ConfigurationError(os.str());
    }
    return build(root, source_name);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigurationError(path.string() + ": cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    ExperimentConfig cfg = parse_config(text.str(), path.string());
    cfg.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return cfg;
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    using nlohmann::ordered_json;
    const auto& o = cfg.solver.prox;
    const auto& v = cfg.verify;
    ordered_json j;
    j["seed"] = cfg.seed;
    j["grid"] = {{"p", cfg.grid.p}, {"N", cfg.grid.N}, {"K", cfg.grid.K}, {"cell_cap", cfg.grid.cell_cap}};
    j["operator"] = {{"alpha", cfg.alpha}};
    j["nonlinearity"] = {{"m", cfg.m}};
    j["solver"] = {{"tau", cfg.solver.tau},
                   {"horizon", cfg.solver.horizon},
                   {"prox",
                    {{"tolerance", o.tolerance},
                     {"mu_initial", o.mu_initial},
                     {"mu_factor", o.mu_factor},
                     {"mu_final", o.mu_final},
                     {"stage_tolerance", o.stage_tolerance},
                     {"max_newton_per_stage", o.max_newton_per_stage},
                     {"max_halvings", o.max_halvings},
                     {"armijo", o.armijo}}}};
    j["initial"] = {{"generator", cfg.initial.generator},
                    {"amplitude", cfg.initial.amplitude},
                    {"radius", cfg.initial.radius},
                    {"path", cfg.initial.path}};
    j["verify"] = {{"samples", v.samples},
                   {"pairs", v.pairs},
                   {"sobolev_orders", v.sobolev_orders},
                   {"prox_powers", v.prox_powers},
                   {"prox_steps", v.prox_steps},
                   {"contraction_powers", v.contraction_powers},
                   {"contraction_tau", v.contraction_tau},
                   {"contraction_horizon", v.contraction_horizon},
                   {"refinement_steps", v.refinement_steps},
                   {"refinement_horizon", v.refinement_horizon},
                   {"fault_scale", v.fault_scale},
                   {"suites", v.suites}};
    return j;
}

}  // namespace padic::lab
