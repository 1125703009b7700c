#include "padic/vladimirov.hpp"

#include "padic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace padic {

double lambda0(int p, double alpha, int N) {
    if (!(alpha > 0.0)) throw ConfigurationError("alpha must be positive");
    const double pd = static_cast<double>(p);
    return (pd - 1.0) / (std::pow(pd, alpha + 1.0) - 1.0) * std::pow(pd, alpha * (1.0 - N));
}

double kernel_constant(int p, double alpha) {
    const double pd = static_cast<double>(p);
    return (1.0 - std::pow(pd, alpha)) / (1.0 - std::pow(pd, -alpha - 1.0));
}

std::vector<double> vladimirov_symbols(const BallGrid& grid, double alpha) {
    std::vector<double> s(static_cast<std::size_t>(grid.size()));
    s[0] = lambda0(grid.prime(), alpha, grid.radius_exponent());
    for (std::int64_t b = 1; b < grid.size(); ++b) {
        s[static_cast<std::size_t>(b)] = std::pow(grid.dual_norm({b}), alpha);
    }
    return s;
}

VladimirovOperator::VladimirovOperator(BallGrid grid, double alpha)
    : VladimirovOperator(grid, alpha, vladimirov_symbols(grid, alpha)) {}

VladimirovOperator::VladimirovOperator(BallGrid grid, double alpha, std::vector<double> symbols)
    : grid_(std::move(grid)),
      alpha_(alpha),
      lambda0_(padic::lambda0(grid_.prime(), alpha, grid_.radius_exponent())),
      a_p_(padic::kernel_constant(grid_.prime(), alpha)),
      symbols_(std::move(symbols)) {
    if (static_cast<std::int64_t>(symbols_.size()) != grid_.size()) {
        throw std::invalid_argument("symbol table length does not match the grid");
    }
    build_stencil();
}

double VladimirovOperator::lambda1() const {
    return std::pow(static_cast<double>(grid_.prime()), alpha_ * (1.0 - grid_.radius_exponent()));
}

void VladimirovOperator::build_stencil() {
    const std::int64_t M = grid_.size();
    const int p = grid_.prime();
    // Cell weight p^{-K} |a'|^{-alpha-1} depends only on v_p(a'): group by valuation.
    std::vector<double> weight_by_valuation(static_cast<std::size_t>(grid_.digits()));
    for (int v = 0; v < grid_.digits(); ++v) {
        const int k = grid_.radius_exponent() - v;
        weight_by_valuation[static_cast<std::size_t>(v)] =
            grid_.haar_weight() * std::pow(static_cast<double>(p), -(alpha_ + 1.0) * k);
    }
    stencil_.assign(static_cast<std::size_t>(M), 0.0);
    double total = 0.0;
    for (std::int64_t k = 1; k < M; ++k) {
        const double w = weight_by_valuation[static_cast<std::size_t>(valuation(k, p))];
        stencil_[static_cast<std::size_t>(k)] = a_p_ * w;
        total += w;
    }
    // The cell of 0 contributes nothing: f(x - y) - f(x) vanishes for y in B_{-K}.
    stencil_[0] = lambda0_ - a_p_ * total;
}

GridFunction VladimirovOperator::apply_kernel(const GridFunction& f) const {
    if (!(f.grid() == grid_)) throw std::invalid_argument("apply_kernel: function lives on a different grid");
    const std::int64_t M = grid_.size();
    GridFunction g(grid_);
    for (std::int64_t a = 0; a < M; ++a) {
        Complex acc = stencil_[0] * f[a];
        std::int64_t src = a;  // a - k mod M
        for (std::int64_t k = 1; k < M; ++k) {
            src = src == 0 ? M - 1 : src - 1;
            acc += stencil_[static_cast<std::size_t>(k)] * f[src];
        }
        g[a] = acc;
    }
    return g;
}

GridFunction VladimirovOperator::apply_spectral(const GridFunction& f) const {
    auto c = forward(f);
    c.scale_by(symbols_);
    return inverse(c);
}

GridFunction VladimirovOperator::apply_inverse(const GridFunction& f) const {
    auto c = forward(f);
    for (std::int64_t b = 0; b < c.size(); ++b) c[b] /= symbols_[static_cast<std::size_t>(b)];
    return inverse(c);
}

BruteSymbol brute_symbol(const VladimirovOperator& op, DualIndex b) {
    const auto e = character_function(op.grid(), b);
    const auto De = op.apply_kernel(e);
    const Complex q = l2_inner(De, e) / l2_inner(e, e);
    BruteSymbol out;
    out.value = q.real();
    out.imag_part = q.imag();
    for (std::int64_t a = 0; a < e.size(); ++a) {
        out.ratio_spread = std::max(out.ratio_spread, std::abs(De[a] / e[a] - q));
    }
    if (out.ratio_spread > 1e-10 * std::max(1.0, std::abs(q))) {
        throw NonEigenfunctionError("character " + std::to_string(b.value) +
                                    " is not an eigenfunction of the kernel form (spread " +
                                    std::to_string(out.ratio_spread) + ")");
    }
    return out;
}

std::string to_string(SymbolCandidate c) {
    switch (c) {
        case SymbolCandidate::eigenvalue_ladder: return "eigenvalue_ladder";
        case SymbolCandidate::unit_prefactor: return "unit_prefactor";
        case SymbolCandidate::ball_prefactor: return "ball_prefactor";
    }
    return "unknown";
}

double candidate_p_symbol(SymbolCandidate c, const BallGrid& grid, double alpha, DualIndex b) {
    if (b.value == 0) return 0.0;
    const double na = std::pow(grid.dual_norm(b), alpha);
    switch (c) {
        case SymbolCandidate::eigenvalue_ladder: return na - lambda0(grid.prime(), alpha, grid.radius_exponent());
        case SymbolCandidate::unit_prefactor: return na;
        case SymbolCandidate::ball_prefactor: return na / grid.measure();
    }
    return 0.0;
}

SymbolArbitration arbitrate_symbol(const VladimirovOperator& op, double tolerance) {
    SymbolArbitration out;
    out.tolerance = tolerance;
    const auto& grid = op.grid();
    out.rows.reserve(static_cast<std::size_t>(grid.size()));
    for (std::int64_t b = 0; b < grid.size(); ++b) {
        SymbolArbitrationRow row;
        row.b = b;
        row.dual_norm = grid.dual_norm({b});
        row.brute = brute_symbol(op, {b}).value;
        for (std::size_t i = 0; i < kSymbolCandidates.size(); ++i) {
            row.candidate[i] = op.lambda0() + candidate_p_symbol(kSymbolCandidates[i], grid, op.alpha(), {b});
            row.gap[i] = std::abs(row.brute - row.candidate[i]);
            out.max_gap[i] = std::max(out.max_gap[i], row.gap[i]);
        }
        out.rows.push_back(row);
    }
    for (std::size_t i = 0; i < kSymbolCandidates.size(); ++i) {
        if (out.max_gap[i] <= tolerance) out.matching.push_back(kSymbolCandidates[i]);
    }
    return out;
}

GridFunction eigenfunction_psi0(const BallGrid& grid) {
    return GridFunction::constant(grid, Complex{1.0 / std::sqrt(grid.measure()), 0.0});
}

GridFunction eigenfunction_first_layer(const BallGrid& grid, int j) {
    if (j < 1 || j >= grid.prime()) {
        throw ConfigurationError("first-layer index j must lie in [1, p-1] (got " + std::to_string(j) + ")");
    }
    // j p^{N-1} x = p^{-K} b with b = j p^{N+K-1}; K >= 1 - N holds on every valid grid.
    const DualIndex b{j * ipow(grid.prime(), grid.digits() - 1)};
    GridFunction f(grid);
    const double amp = 1.0 / std::sqrt(grid.measure());
    for (std::int64_t a = 0; a < grid.size(); ++a) f[a] = amp * grid.character({a}, b);
    return f;
}

}  // namespace padic
