#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace padic {

inline constexpr std::int64_t kDefaultCellCap = std::int64_t{1} << 20;

/// Cell of B_N / B_{-K}. The integer a in [0, M) stands for
/// x = p^{-N} (a_0 + a_1 p + ... + a_{N+K-1} p^{N+K-1}) where a_i are the base-p digits of a.
struct PointIndex {
    std::int64_t value = 0;
    friend constexpr auto operator<=>(PointIndex, PointIndex) = default;
};

/// Dual class xi = p^{-K} b + B_{-N} in Q_p / B_{-N}.
struct DualIndex {
    std::int64_t value = 0;
    friend constexpr auto operator<=>(DualIndex, DualIndex) = default;
};

/// Largest v with p^v | n. Throws std::domain_error for n <= 0.
int valuation(std::int64_t n, std::int64_t p);

bool is_prime(std::int64_t n);

/// Exact integer power; throws std::overflow_error past int64.
std::int64_t ipow(std::int64_t base, int exponent);

/// p^k as a double (k may be negative).
double pow_p(int p, int k);

/// The finite quotient group B_N / B_{-K}, cyclic of order M = p^{N+K}.
///
/// Every function on the ball that is constant on cosets of B_{-K} is a vector
/// indexed by PointIndex; characters of the ball that are trivial on B_{-K}
/// are indexed by DualIndex. Group operations are integer arithmetic mod M,
/// so all index-level computations are exact.
///
/// The grid is immutable and cheap to copy; the table of M-th roots of unity
/// is shared between copies.
class BallGrid {
public:
    BallGrid(int p, int N, int K, std::int64_t cell_cap = kDefaultCellCap);

    int prime() const noexcept { return p_; }
    int radius_exponent() const noexcept { return N_; }
    int resolution_exponent() const noexcept { return K_; }
    /// M = p^{N+K}.
    std::int64_t size() const noexcept { return M_; }
    /// Number of base-p digits of an index, N + K.
    int digits() const noexcept { return N_ + K_; }
    /// Haar measure of one cell, p^{-K} (times the fault-injection scale, normally 1).
    double haar_weight() const noexcept { return haar_weight_; }
    /// Haar measure of B_N, p^N.
    double measure() const noexcept { return pow_p(p_, N_); }

    /// v_p(a) for 0 < a < M.
    int index_valuation(std::int64_t a) const;

    /// log_p |x|_p = N - v_p(a); empty for the cell of 0.
    std::optional<int> point_abs_exponent(PointIndex a) const;
    /// |x|_p on the cell; 0 for the cell containing 0 (its canonical representative).
    double point_abs(PointIndex a) const;

    /// log_p ||xi|| = K - v_p(b); empty for the trivial class.
    std::optional<int> dual_norm_exponent(DualIndex b) const;
    /// ||xi|| = p^{K - v_p(b)}, and 0 for b = 0.
    double dual_norm(DualIndex b) const;

    PointIndex add(PointIndex a1, PointIndex a2) const;
    PointIndex sub(PointIndex a1, PointIndex a2) const;
    PointIndex negate(PointIndex a) const;
    DualIndex negate(DualIndex b) const;

    /// chi(x xi) = exp(2 pi i (a b mod M) / M).
    std::complex<double> character(PointIndex a, DualIndex b) const;
    /// exp(2 pi i k / M) for k taken mod M.
    std::complex<double> root_of_unity(std::int64_t k) const;

    /// All cells with |x|_p = radius. radius = 0 gives {0}. Throws ConfigurationError
    /// when the radius is not one of 0, p^{1-K}, ..., p^N.
    std::vector<PointIndex> shell(double radius) const;
    /// All nonzero cells with |x|_p = p^k, 1 - K <= k <= N.
    std::vector<PointIndex> shell_by_exponent(int k) const;

    /// Returns a copy whose Haar weight is multiplied by scale. Verification
    /// suites use this to check that they notice a wrong measure.
    BallGrid with_haar_scale(double scale) const;

    friend bool operator==(const BallGrid& lhs, const BallGrid& rhs) noexcept {
        return lhs.p_ == rhs.p_ && lhs.N_ == rhs.N_ && lhs.K_ == rhs.K_ &&
               lhs.haar_weight_ == rhs.haar_weight_;
    }

private:
    void check_point(std::int64_t a) const;

    int p_;
    int N_;
    int K_;
    std::int64_t M_;
    double haar_weight_;
    std::shared_ptr<const std::vector<std::complex<double>>> roots_;
};

}  // namespace padic
