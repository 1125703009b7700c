#include "padic/ball_grid.hpp"

#include "padic/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace padic {

int valuation(std::int64_t n, std::int64_t p) {
    if (p < 2) throw std::domain_error("valuation: base must be >= 2");
    if (n <= 0) throw std::domain_error("valuation: argument must be positive (v_p(0) is infinite)");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::int64_t ipow(std::int64_t base, int exponent) {
    if (exponent < 0) throw std::domain_error("ipow: negative exponent");
    std::int64_t result = 1;
    for (int i = 0; i < exponent; ++i) {
        if (base != 0 && std::abs(result) > std::numeric_limits<std::int64_t>::max() / std::abs(base)) {
            throw std::overflow_error("ipow: result exceeds int64");
        }
        result *= base;
    }
    return result;
}

double pow_p(int p, int k) {
    // Repeated multiplication keeps p^k exact whenever it is representable.
    double r = 1.0;
    for (int i = 0; i < std::abs(k); ++i) r *= static_cast<double>(p);
    return k >= 0 ? r : 1.0 / r;
}

BallGrid::BallGrid(int p, int N, int K, std::int64_t cell_cap) : p_(p), N_(N), K_(K), M_(0), haar_weight_(0.0) {
    if (!is_prime(p)) throw ConfigurationError("p must be prime (got " + std::to_string(p) + ")");
    if (N + K < 1) {
        throw ConfigurationError("N + K must be >= 1 (got N=" + std::to_string(N) + ", K=" + std::to_string(K) + ")");
    }
    // Compare in floating point first so that absurd exponents do not overflow.
    if ((N + K) * std::log(static_cast<double>(p)) > std::log(static_cast<double>(cell_cap)) + 1e-9) {
        throw ConfigurationError("grid too large: p^(N+K) exceeds the cell cap " + std::to_string(cell_cap));
    }
    M_ = ipow(p, N + K);
    if (M_ > cell_cap) {
        throw ConfigurationError("grid too large: p^(N+K) = " + std::to_string(M_) + " exceeds the cell cap " +
                                 std::to_string(cell_cap));
    }
    haar_weight_ = pow_p(p, -K);

    auto roots = std::make_shared<std::vector<std::complex<double>>>(static_cast<std::size_t>(M_));
    const double step = 2.0 * std::numbers::pi / static_cast<double>(M_);
    for (std::int64_t k = 0; k < M_; ++k) {
        (*roots)[static_cast<std::size_t>(k)] = std::polar(1.0, step * static_cast<double>(k));
    }
    roots_ = std::move(roots);
}

void BallGrid::check_point(std::int64_t a) const {
    if (a < 0 || a >= M_) {
        throw std::out_of_range("index " + std::to_string(a) + " outside [0, " + std::to_string(M_) + ")");
    }
}

int BallGrid::index_valuation(std::int64_t a) const {
    check_point(a);
    return valuation(a, p_);
}

std::optional<int> BallGrid::point_abs_exponent(PointIndex a) const {
    check_point(a.value);
    if (a.value == 0) return std::nullopt;
    return N_ - valuation(a.value, p_);
}

double BallGrid::point_abs(PointIndex a) const {
    const auto k = point_abs_exponent(a);
    return k ? pow_p(p_, *k) : 0.0;
}

std::optional<int> BallGrid::dual_norm_exponent(DualIndex b) const {
    check_point(b.value);
    if (b.value == 0) return std::nullopt;
    return K_ - valuation(b.value, p_);
}

double BallGrid::dual_norm(DualIndex b) const {
    const auto k = dual_norm_exponent(b);
    return k ? pow_p(p_, *k) : 0.0;
}

PointIndex BallGrid::add(PointIndex a1, PointIndex a2) const {
    check_point(a1.value);
    check_point(a2.value);
    std::int64_t s = a1.value + a2.value;
    if (s >= M_) s -= M_;
    return {s};
}

PointIndex BallGrid::sub(PointIndex a1, PointIndex a2) const {
    check_point(a1.value);
    check_point(a2.value);
    std::int64_t d = a1.value - a2.value;
    if (d < 0) d += M_;
    return {d};
}

PointIndex BallGrid::negate(PointIndex a) const {
    check_point(a.value);
    return {a.value == 0 ? 0 : M_ - a.value};
}

DualIndex BallGrid::negate(DualIndex b) const {
    check_point(b.value);
    return {b.value == 0 ? 0 : M_ - b.value};
}

std::complex<double> BallGrid::character(PointIndex a, DualIndex b) const {
    check_point(a.value);
    check_point(b.value);
    // a, b < 2^31 under any admissible cap, so the product fits in int64.
    return (*roots_)[static_cast<std::size_t>((a.value * b.value) % M_)];
}

std::complex<double> BallGrid::root_of_unity(std::int64_t k) const {
    k %= M_;
    if (k < 0) k += M_;
    return (*roots_)[static_cast<std::size_t>(k)];
}

std::vector<PointIndex> BallGrid::shell_by_exponent(int k) const {
    if (k < 1 - K_ || k > N_) {
        throw ConfigurationError("shell exponent " + std::to_string(k) + " not attainable on this grid");
    }
    // |x|_p = p^k  <=>  v_p(a) = N - k.
    const int v = N_ - k;
    const std::int64_t step = ipow(p_, v);
    std::vector<PointIndex> out;
    out.reserve(static_cast<std::size_t>(M_ / step));
    for (std::int64_t a = step; a < M_; a += step) {
        if ((a / step) % p_ != 0) out.push_back({a});
    }
    return out;
}

std::vector<PointIndex> BallGrid::shell(double radius) const {
    if (radius == 0.0) return {PointIndex{0}};
    for (int k = 1 - K_; k <= N_; ++k) {
        const double r = pow_p(p_, k);
        if (std::abs(radius - r) <= 1e-12 * r) return shell_by_exponent(k);
    }
    throw ConfigurationError("radius " + std::to_string(radius) + " is not attainable on this grid");
}

BallGrid BallGrid::with_haar_scale(double scale) const {
    BallGrid copy = *this;
    copy.haar_weight_ *= scale;
    return copy;
}

}  // namespace padic
