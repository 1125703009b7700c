#pragma once

#include "padic/ball_grid.hpp"
#include "padic/harmonic.hpp"
#include "padic/vladimirov.hpp"

#include <span>
#include <vector>

namespace padic {

/// ||f||_{H^alpha} = sqrt( sum_b |F_N f(b)|^2 (1 + ||xi||^2)^alpha ).
double h_alpha_norm(const GridFunction& f, double alpha);

/// Gagliardo-type seminorm [f]_s, the double integral
/// int int |f(x) - f(y)|^2 / |x - y|_p^{2s+1} dx dy, summed exactly over cell pairs.
double ags_seminorm(const GridFunction& f, double s);

/// A_s(xi) = int_{B_N} |chi(z xi) - 1|^2 / |z|^{2s+1} dz by closed shell summation.
double ags_multiplier(const BallGrid& grid, double s, DualIndex b);
std::vector<double> ags_multiplier_table(const BallGrid& grid, double s);

/// A_s(xi) by summing the integrand over the cells of the grid (uses the Haar weight).
double ags_multiplier_by_cells(const BallGrid& grid, double s, DualIndex b);

/// [f]_s from the multiplier identity: sqrt( p^N sum_b |F_N f(b)|^2 A_s(xi) ).
/// The p^N factor is the Plancherel normalization of F_N.
double ags_via_multiplier(const GridFunction& f, double s);
double ags_via_multiplier(const GridFunction& f, std::span<const double> multiplier_table);

/// L_2 + [.]_s, the full AGS norm.
double ags_norm(const GridFunction& f, double s);

struct EquivalenceConstants {
    double c1 = 0.0;  ///< max over b != 0 of A_s(xi) / ||xi||^{2s} on this grid
    double c2 = 0.0;  ///< 2 p^{-2s}, the integral over |eta| <= p
};

EquivalenceConstants equivalence_constants(const BallGrid& grid, double s);

/// sqrt( p^N sum_b symbol(b) |F_N f(b)|^2 ): the eigenbasis form sum a_k |c_k|^2.
double h1_norm(const GridFunction& f, const VladimirovOperator& op);
/// sqrt( p^N sum_b |F_N f(b)|^2 / symbol(b) ).
double hminus1_norm(const GridFunction& f, const VladimirovOperator& op);
/// sqrt( ||f||^2 + (D f, f) ).
double h1_full_norm(const GridFunction& f, const VladimirovOperator& op);
/// sqrt( ||f||^2 + (D^{-1} f, f) ).
double hminus1_full_norm(const GridFunction& f, const VladimirovOperator& op);

/// p^N sum_b F_N f(b) conj(F_N g(b)) / symbol(b).
Complex hminus1_inner(const GridFunction& f, const GridFunction& g, const VladimirovOperator& op);

/// Bounds lower <= ||u||_X^2 / ||u||_Y^2 <= upper valid for every nonzero u on the grid.
struct RatioEnvelope {
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double ratio, double rel_slack = 1e-12) const noexcept {
        return ratio >= lower * (1.0 - rel_slack) && ratio <= upper * (1.0 + rel_slack);
    }
};

/// Certified constants relating the three squared norms H^alpha, L_2^2 + [.]_alpha^2 and H_1.
/// All three are diagonal in the character basis, so the extreme ratios of their
/// multipliers bound the ratio of the norms.
struct NormEquivalence {
    RatioEnvelope h_alpha_over_ags;
    RatioEnvelope ags_over_h1;
    RatioEnvelope h_alpha_over_h1;
};

/// Requires 0 < alpha < 1 (the AGS order s is taken equal to the operator order).
NormEquivalence certify_norm_equivalence(const VladimirovOperator& op);

/// Squared norms of one function, matching the three multiplier families above.
struct SquaredNorms {
    double h_alpha = 0.0;
    double ags = 0.0;  ///< ||f||^2 + [f]^2
    double h1 = 0.0;
};

SquaredNorms squared_norms(const GridFunction& f, const VladimirovOperator& op);

}  // namespace padic
