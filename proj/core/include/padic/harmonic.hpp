#pragma once

#include "padic/ball_grid.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace padic {

using Complex = std::complex<double>;

/// A function on B_N that is constant on cosets of B_{-K}: one value per cell.
class GridFunction {
public:
    explicit GridFunction(BallGrid grid);
    GridFunction(BallGrid grid, std::vector<Complex> values);

    static GridFunction constant(const BallGrid& grid, Complex c);
    static GridFunction from_real(const BallGrid& grid, std::span<const double> values);

    const BallGrid& grid() const noexcept { return grid_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()); }

    Complex& operator[](std::int64_t a) { return values_[static_cast<std::size_t>(a)]; }
    const Complex& operator[](std::int64_t a) const { return values_[static_cast<std::size_t>(a)]; }
    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }

    /// Real parts, for the real-valued nonlinear machinery.
    std::vector<double> real_values() const;
    /// max |Im f| over cells.
    double max_imag() const;

    GridFunction& operator+=(const GridFunction& rhs);
    GridFunction& operator-=(const GridFunction& rhs);
    GridFunction& operator*=(Complex c);

    friend GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
    friend GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
    friend GridFunction operator*(Complex c, GridFunction f) { return f *= c; }
    friend GridFunction operator*(GridFunction f, Complex c) { return f *= c; }

private:
    BallGrid grid_;
    std::vector<Complex> values_;
};

/// Fourier coefficients on the dual classes, indexed by DualIndex b.
class SpectralFunction {
public:
    explicit SpectralFunction(BallGrid grid);
    SpectralFunction(BallGrid grid, std::vector<Complex> coeffs);

    const BallGrid& grid() const noexcept { return grid_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(coeffs_.size()); }

    Complex& operator[](std::int64_t b) { return coeffs_[static_cast<std::size_t>(b)]; }
    const Complex& operator[](std::int64_t b) const { return coeffs_[static_cast<std::size_t>(b)]; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }

    /// Multiply coefficient b by multiplier[b].
    SpectralFunction& scale_by(std::span<const double> multiplier);

    /// max_b |c(-b) - conj(c(b))|; zero exactly when the physical function is real.
    double reality_defect() const;

private:
    BallGrid grid_;
    std::vector<Complex> coeffs_;
};

enum class TransformMethod {
    automatic,  ///< direct sum up to the fast-transform threshold, radix-p recursion above it
    direct,     ///< O(M^2) character sum
    fast,       ///< O(M log M) radix-p recursion
};

inline constexpr std::int64_t kFastTransformThreshold = 4096;

/// (F_N f)(xi) = p^{-N} int_{B_N} chi(x xi) f(x) dx, i.e. (1/M) sum_a f(a) exp(2 pi i a b / M).
SpectralFunction forward(const GridFunction& f, TransformMethod method = TransformMethod::automatic);

/// f(a) = sum_b g(b) exp(-2 pi i a b / M).
GridFunction inverse(const SpectralFunction& g, TransformMethod method = TransformMethod::automatic);

/// Haar-weighted inner product (f, g) = p^{-K} sum_a f(a) conj(g(a)).
Complex l2_inner(const GridFunction& f, const GridFunction& g);

/// sqrt(p^{-K} sum_a |f(a)|^2).
double l2_norm(const GridFunction& f);

/// | p^{-N} ||f||^2 - sum_b |F_N f(b)|^2 |.
double plancherel_deficit(const GridFunction& f);

/// exp(-2 pi i a b0 / M): the function whose transform is the indicator of b0.
GridFunction character_function(const BallGrid& grid, DualIndex b0);

/// max_a |f(a) - g(a)|.
double max_abs_diff(const GridFunction& f, const GridFunction& g);
double max_abs_diff(const SpectralFunction& f, const SpectralFunction& g);

}  // namespace padic
