#include "padic/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace padic {

namespace {

void require_same_grid(const BallGrid& a, const BallGrid& b) {
    if (!(a == b)) throw std::invalid_argument("grid functions live on different grids");
}

// out[k] = sum_j in[j] * w^(sign * j * k) with w = exp(2 pi i / M), evaluated directly.
std::vector<Complex> direct_sum(const BallGrid& grid, std::span<const Complex> in, int sign) {
    const std::int64_t M = grid.size();
    std::vector<Complex> out(static_cast<std::size_t>(M));
    for (std::int64_t k = 0; k < M; ++k) {
        Complex acc{0.0, 0.0};
        std::int64_t phase = 0;  // j * k mod M, advanced incrementally
        for (std::int64_t j = 0; j < M; ++j) {
            const Complex w = grid.root_of_unity(sign > 0 ? phase : -phase);
            acc += in[static_cast<std::size_t>(j)] * w;
            phase += k;
            if (phase >= M) phase -= M;
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

// Radix-p decimation in time. `in` is read with the given stride; the sub-transform
// of length n uses the n-th roots of unity w^(M/n).
void radix_p(const BallGrid& grid, const Complex* in, std::int64_t n, std::int64_t stride, int sign, Complex* out) {
    const std::int64_t p = grid.prime();
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const std::int64_t m = n / p;
    std::vector<Complex> sub(static_cast<std::size_t>(n));
    for (std::int64_t r = 0; r < p; ++r) {
        radix_p(grid, in + r * stride, m, stride * p, sign, sub.data() + r * m);
    }
    const std::int64_t root_step = grid.size() / n;
    for (std::int64_t k = 0; k < n; ++k) {
        Complex acc{0.0, 0.0};
        const std::int64_t km = k % m;
        for (std::int64_t r = 0; r < p; ++r) {
            const std::int64_t e = (r * k) % n * root_step;
            acc += sub[static_cast<std::size_t>(r * m + km)] * grid.root_of_unity(sign > 0 ? e : -e);
        }
        out[k] = acc;
    }
}

std::vector<Complex> transform(const BallGrid& grid, std::span<const Complex> in, int sign, TransformMethod method) {
    const bool fast = method == TransformMethod::fast ||
                      (method == TransformMethod::automatic && grid.size() > kFastTransformThreshold);
    if (!fast) return direct_sum(grid, in, sign);
    std::vector<Complex> out(in.size());
    radix_p(grid, in.data(), grid.size(), 1, sign, out.data());
    return out;
}

}  // namespace

GridFunction::GridFunction(BallGrid grid)
    : grid_(std::move(grid)), values_(static_cast<std::size_t>(grid_.size()), Complex{0.0, 0.0}) {}

GridFunction::GridFunction(BallGrid grid, std::vector<Complex> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != grid_.size()) {
        throw std::invalid_argument("GridFunction: expected " + std::to_string(grid_.size()) + " values, got " +
                                    std::to_string(values_.size()));
    }
}

GridFunction GridFunction::constant(const BallGrid& grid, Complex c) {
    return GridFunction(grid, std::vector<Complex>(static_cast<std::size_t>(grid.size()), c));
}

GridFunction GridFunction::from_real(const BallGrid& grid, std::span<const double> values) {
    std::vector<Complex> v(values.begin(), values.end());
    return GridFunction(grid, std::move(v));
}

std::vector<double> GridFunction::real_values() const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](const Complex& z) { return z.real(); });
    return out;
}

double GridFunction::max_imag() const {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z.imag()));
    return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& rhs) {
    require_same_grid(grid_, rhs.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& rhs) {
    require_same_grid(grid_, rhs.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(Complex c) {
    for (auto& z : values_) z *= c;
    return *this;
}

SpectralFunction::SpectralFunction(BallGrid grid)
    : grid_(std::move(grid)), coeffs_(static_cast<std::size_t>(grid_.size()), Complex{0.0, 0.0}) {}

SpectralFunction::SpectralFunction(BallGrid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (static_cast<std::int64_t>(coeffs_.size()) != grid_.size()) {
        throw std::invalid_argument("SpectralFunction: expected " + std::to_string(grid_.size()) +
                                    " coefficients, got " + std::to_string(coeffs_.size()));
    }
}

SpectralFunction& SpectralFunction::scale_by(std::span<const double> multiplier) {
    if (multiplier.size() != coeffs_.size()) throw std::invalid_argument("scale_by: multiplier length mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] *= multiplier[i];
    return *this;
}

double SpectralFunction::reality_defect() const {
    double worst = 0.0;
    const std::int64_t M = grid_.size();
    for (std::int64_t b = 0; b < M; ++b) {
        const std::int64_t nb = b == 0 ? 0 : M - b;
        worst = std::max(worst, std::abs(coeffs_[static_cast<std::size_t>(nb)] -
                                         std::conj(coeffs_[static_cast<std::size_t>(b)])));
    }
    return worst;
}

SpectralFunction forward(const GridFunction& f, TransformMethod method) {
    auto c = transform(f.grid(), f.values(), +1, method);
    // p^{-N} * p^{-K} = 1/M: the normalization is a property of the group, not of the
    // (possibly fault-injected) Haar weight.
    const double scale = 1.0 / static_cast<double>(f.grid().size());
    for (auto& z : c) z *= scale;
    return SpectralFunction(f.grid(), std::move(c));
}

GridFunction inverse(const SpectralFunction& g, TransformMethod method) {
    return GridFunction(g.grid(), transform(g.grid(), g.coeffs(), -1, method));
}

Complex l2_inner(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid());
    Complex acc{0.0, 0.0};
    for (std::int64_t a = 0; a < f.size(); ++a) acc += f[a] * std::conj(g[a]);
    return acc * f.grid().haar_weight();
}

double l2_norm(const GridFunction& f) {
    double acc = 0.0;
    for (const auto& z : f.values()) acc += std::norm(z);
    return std::sqrt(acc * f.grid().haar_weight());
}

double plancherel_deficit(const GridFunction& f) {
    const auto c = forward(f);
    double spectral = 0.0;
    for (const auto& z : c.coeffs()) spectral += std::norm(z);
    const double n = l2_norm(f);
    return std::abs(n * n / f.grid().measure() - spectral);
}

GridFunction character_function(const BallGrid& grid, DualIndex b0) {
    GridFunction f(grid);
    for (std::int64_t a = 0; a < grid.size(); ++a) f[a] = std::conj(grid.character({a}, b0));
    return f;
}

double max_abs_diff(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid());
    double m = 0.0;
    for (std::int64_t a = 0; a < f.size(); ++a) m = std::max(m, std::abs(f[a] - g[a]));
    return m;
}

double max_abs_diff(const SpectralFunction& f, const SpectralFunction& g) {
    require_same_grid(f.grid(), g.grid());
    double m = 0.0;
    for (std::int64_t b = 0; b < f.size(); ++b) m = std::max(m, std::abs(f[b] - g[b]));
    return m;
}

}  // namespace padic
