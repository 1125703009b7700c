#pragma once

#include "padic/ball_grid.hpp"
#include "padic/harmonic.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace padic {

/// Smallest eigenvalue of D_N^alpha on B_N: (p-1)/(p^{alpha+1}-1) * p^{alpha(1-N)}.
/// Throws ConfigurationError for alpha <= 0.
double lambda0(int p, double alpha, int N);

/// Kernel constant (1 - p^alpha) / (1 - p^{-alpha-1}); negative for alpha > 0.
double kernel_constant(int p, double alpha);

/// The Vladimirov operator D_N^alpha restricted to the ball, on one grid.
///
/// Two independent application paths are provided: the kernel form
///   (D f)(x) = lambda0 f(x) + a_p int_{B_N} |y|^{-alpha-1} [f(x-y) - f(x)] dy,
/// summed exactly over cells, and the spectral form that multiplies Fourier
/// coefficients by the symbol table. The symbol table is lambda0 on the trivial
/// class and ||xi||^alpha elsewhere.
class VladimirovOperator {
public:
    VladimirovOperator(BallGrid grid, double alpha);

    /// Operator with an explicitly supplied symbol table (length M) for the spectral
    /// path. The kernel path is unaffected. Used to inject faults in verification.
    VladimirovOperator(BallGrid grid, double alpha, std::vector<double> symbols);

    const BallGrid& grid() const noexcept { return grid_; }
    double alpha() const noexcept { return alpha_; }
    double lambda0() const noexcept { return lambda0_; }
    double kernel_constant() const noexcept { return a_p_; }
    /// p^{alpha(1-N)}, the eigenvalue of the first layer.
    double lambda1() const;

    double symbol(DualIndex b) const { return symbols_.at(static_cast<std::size_t>(b.value)); }
    std::span<const double> symbols() const noexcept { return symbols_; }

    /// Kernel form, O(M^2).
    GridFunction apply_kernel(const GridFunction& f) const;
    /// inverse(symbol * forward(f)).
    GridFunction apply_spectral(const GridFunction& f) const;
    /// inverse(forward(f) / symbol).
    GridFunction apply_inverse(const GridFunction& f) const;

    /// First column of the circulant matrix of the kernel form: (D f)(a) = sum_k stencil[k] f(a - k).
    /// Real and symmetric under k -> -k.
    const std::vector<double>& kernel_stencil() const noexcept { return stencil_; }

private:
    void build_stencil();

    BallGrid grid_;
    double alpha_;
    double lambda0_;
    double a_p_;
    std::vector<double> symbols_;
    std::vector<double> stencil_;
};

/// Symbol table of D_N^alpha: lambda0 at b = 0, ||xi||^alpha otherwise.
std::vector<double> vladimirov_symbols(const BallGrid& grid, double alpha);

struct BruteSymbol {
    double value = 0.0;          ///< Re (D e_b, e_b) / (e_b, e_b)
    double imag_part = 0.0;      ///< Im of the same quotient
    double ratio_spread = 0.0;   ///< max_a |(D e_b)(a) / e_b(a) - value|
};

/// Recomputes the multiplier of the kernel form on the character e_b by applying
/// apply_kernel and taking the Rayleigh quotient. Throws NonEigenfunctionError when
/// e_b is not mapped to a multiple of itself (spread > 1e-10 relative).
BruteSymbol brute_symbol(const VladimirovOperator& op, DualIndex b);

/// Closed-form candidates for the multiplier of P_{N,alpha} = D_N^alpha - lambda0.
enum class SymbolCandidate {
    eigenvalue_ladder,  ///< lambda_mu - lambda0, i.e. ||xi||^alpha - lambda0 off the trivial class
    unit_prefactor,     ///< ||xi||^alpha
    ball_prefactor,     ///< p^{-N} ||xi||^alpha
};

inline constexpr std::array<SymbolCandidate, 3> kSymbolCandidates = {
    SymbolCandidate::eigenvalue_ladder, SymbolCandidate::unit_prefactor, SymbolCandidate::ball_prefactor};

std::string to_string(SymbolCandidate c);

/// Value of a candidate P-multiplier on class b (0 on the trivial class for every candidate).
double candidate_p_symbol(SymbolCandidate c, const BallGrid& grid, double alpha, DualIndex b);

struct SymbolArbitrationRow {
    std::int64_t b = 0;
    double dual_norm = 0.0;
    double brute = 0.0;                ///< brute D-multiplier
    std::array<double, 3> candidate{}; ///< candidate D-multipliers, lambda0 + candidate P-multiplier
    std::array<double, 3> gap{};       ///< |brute - candidate|
};

struct SymbolArbitration {
    std::vector<SymbolArbitrationRow> rows;
    std::array<double, 3> max_gap{};
    double tolerance = 1e-10;
    /// Candidates whose max gap is within tolerance.
    std::vector<SymbolCandidate> matching;
    /// True iff exactly one candidate matches.
    bool decided() const noexcept { return matching.size() == 1; }
};

/// Compares brute_symbol on every class against each closed-form candidate.
SymbolArbitration arbitrate_symbol(const VladimirovOperator& op, double tolerance = 1e-10);

/// Psi_0 = p^{-N/2} on B_N.
GridFunction eigenfunction_psi0(const BallGrid& grid);

/// p^{-N/2} chi(j p^{N-1} x), 1 <= j <= p-1; eigenvalue p^{alpha(1-N)}.
GridFunction eigenfunction_first_layer(const BallGrid& grid, int j);

}  // namespace padic
