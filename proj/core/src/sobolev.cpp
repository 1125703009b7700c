#include "padic/sobolev.hpp"

#include "padic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace padic {

namespace {

void require_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("Sobolev order s must lie in (0, 1)");
}

double weighted_spectral_sum(const SpectralFunction& c, std::span<const double> weight) {
    double acc = 0.0;
    for (std::int64_t b = 0; b < c.size(); ++b) acc += std::norm(c[b]) * weight[static_cast<std::size_t>(b)];
    return acc;
}

std::vector<double> ratio_table(std::span<const double> num, std::span<const double> den) {
    std::vector<double> r(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) r[i] = num[i] / den[i];
    return r;
}

RatioEnvelope envelope_of(const std::vector<double>& ratios) {
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    return {*lo, *hi};
}

}  // namespace

double h_alpha_norm(const GridFunction& f, double alpha) {
    const auto c = forward(f);
    double acc = 0.0;
    for (std::int64_t b = 0; b < c.size(); ++b) {
        const double n = f.grid().dual_norm({b});
        acc += std::norm(c[b]) * std::pow(1.0 + n * n, alpha);
    }
    return std::sqrt(acc);
}

double ags_seminorm(const GridFunction& f, double s) {
    require_order(s);
    const auto& grid = f.grid();
    const std::int64_t M = grid.size();
    const double w2 = grid.haar_weight() * grid.haar_weight();
    // Pairs (a, a - k): the weight depends on k only, and same-cell pairs (k = 0) vanish.
    double acc = 0.0;
    for (std::int64_t k = 1; k < M; ++k) {
        const double weight = w2 / std::pow(grid.point_abs({k}), 2.0 * s + 1.0);
        double inner = 0.0;
        for (std::int64_t a = 0; a < M; ++a) {
            const std::int64_t c = a >= k ? a - k : a - k + M;
            inner += std::norm(f[a] - f[c]);
        }
        acc += weight * inner;
    }
    return std::sqrt(acc);
}

double ags_multiplier(const BallGrid& grid, double s, DualIndex b) {
    require_order(s);
    const auto k0 = grid.dual_norm_exponent(b);
    if (!k0) return 0.0;
    const double p = grid.prime();
    double acc = 0.0;
    // Shell |z| = p^k has measure p^k (1 - 1/p); its character integral is the full
    // measure when p^k ||xi|| <= 1, -p^{k-1} when p^k ||xi|| = p, and 0 beyond.
    // Shells inside B_{-K} see chi(z xi) = 1 and contribute nothing.
    for (int k = 1 - grid.resolution_exponent(); k <= grid.radius_exponent(); ++k) {
        const int level = k + *k0;
        if (level <= 0) continue;
        const double pk = pow_p(grid.prime(), k);
        const double shell_integral = level == 1 ? 2.0 * pk : 2.0 * pk * (1.0 - 1.0 / p);
        acc += shell_integral * std::pow(pk, -(2.0 * s + 1.0));
    }
    return acc;
}

std::vector<double> ags_multiplier_table(const BallGrid& grid, double s) {
    std::vector<double> t(static_cast<std::size_t>(grid.size()));
    for (std::int64_t b = 0; b < grid.size(); ++b) t[static_cast<std::size_t>(b)] = ags_multiplier(grid, s, {b});
    return t;
}

double ags_multiplier_by_cells(const BallGrid& grid, double s, DualIndex b) {
    require_order(s);
    double acc = 0.0;
    for (std::int64_t a = 1; a < grid.size(); ++a) {
        acc += std::norm(grid.character({a}, b) - 1.0) / std::pow(grid.point_abs({a}), 2.0 * s + 1.0);
    }
    return acc * grid.haar_weight();
}

double ags_via_multiplier(const GridFunction& f, std::span<const double> multiplier_table) {
    if (static_cast<std::int64_t>(multiplier_table.size()) != f.size()) {
        throw std::invalid_argument("ags_via_multiplier: table length mismatch");
    }
    return std::sqrt(f.grid().measure() * weighted_spectral_sum(forward(f), multiplier_table));
}

double ags_via_multiplier(const GridFunction& f, double s) {
    return ags_via_multiplier(f, ags_multiplier_table(f.grid(), s));
}

double ags_norm(const GridFunction& f, double s) { return l2_norm(f) + ags_seminorm(f, s); }

EquivalenceConstants equivalence_constants(const BallGrid& grid, double s) {
    require_order(s);
    EquivalenceConstants out;
    out.c2 = 2.0 * std::pow(static_cast<double>(grid.prime()), -2.0 * s);
    for (std::int64_t b = 1; b < grid.size(); ++b) {
        const double ratio = ags_multiplier(grid, s, {b}) / std::pow(grid.dual_norm({b}), 2.0 * s);
        out.c1 = std::max(out.c1, ratio);
    }
    return out;
}

double h1_norm(const GridFunction& f, const VladimirovOperator& op) {
    return std::sqrt(f.grid().measure() * weighted_spectral_sum(forward(f), op.symbols()));
}

double hminus1_norm(const GridFunction& f, const VladimirovOperator& op) {
    const auto c = forward(f);
    double acc = 0.0;
    for (std::int64_t b = 0; b < c.size(); ++b) acc += std::norm(c[b]) / op.symbol({b});
    return std::sqrt(f.grid().measure() * acc);
}

double h1_full_norm(const GridFunction& f, const VladimirovOperator& op) {
    const double l2 = l2_norm(f);
    const double h1 = h1_norm(f, op);
    return std::sqrt(l2 * l2 + h1 * h1);
}

double hminus1_full_norm(const GridFunction& f, const VladimirovOperator& op) {
    const double l2 = l2_norm(f);
    const double hm = hminus1_norm(f, op);
    return std::sqrt(l2 * l2 + hm * hm);
}

Complex hminus1_inner(const GridFunction& f, const GridFunction& g, const VladimirovOperator& op) {
    const auto cf = forward(f);
    const auto cg = forward(g);
    Complex acc{0.0, 0.0};
    for (std::int64_t b = 0; b < cf.size(); ++b) acc += cf[b] * std::conj(cg[b]) / op.symbol({b});
    return acc * f.grid().measure();
}

NormEquivalence certify_norm_equivalence(const VladimirovOperator& op) {
    const double s = op.alpha();
    require_order(s);
    const auto& grid = op.grid();
    const std::size_t M = static_cast<std::size_t>(grid.size());
    std::vector<double> m_h(M), m_ags(M), m_h1(M);
    for (std::size_t b = 0; b < M; ++b) {
        const double n = grid.dual_norm({static_cast<std::int64_t>(b)});
        m_h[b] = std::pow(1.0 + n * n, s);
        m_ags[b] = grid.measure() * (1.0 + ags_multiplier(grid, s, {static_cast<std::int64_t>(b)}));
        m_h1[b] = grid.measure() * op.symbols()[b];
    }
    return {envelope_of(ratio_table(m_h, m_ags)), envelope_of(ratio_table(m_ags, m_h1)),
            envelope_of(ratio_table(m_h, m_h1))};
}

SquaredNorms squared_norms(const GridFunction& f, const VladimirovOperator& op) {
    const double h = h_alpha_norm(f, op.alpha());
    const double l2 = l2_norm(f);
    const double ags = ags_seminorm(f, op.alpha());
    const double h1 = h1_norm(f, op);
    return {h * h, l2 * l2 + ags * ags, h1 * h1};
}

}  // namespace padic
