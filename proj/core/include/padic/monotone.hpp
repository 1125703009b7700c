#pragma once

#include "padic/harmonic.hpp"
#include "padic/vladimirov.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace padic {

/// phi(r) = |r|^{m-1} r together with its inverse eta(r) = |r|^{1/m - 1} r and the
/// convex primitive j(r) = |r|^{m+1} / (m+1), so that j' = phi.
class PowerLaw {
public:
    explicit PowerLaw(double m);

    double exponent() const noexcept { return m_; }

    double phi(double r) const;
    double eta(double r) const;
    double j(double r) const;
    /// phi'(r); +infinity at r = 0 when m < 1.
    double phi_prime(double r) const;
    /// eta'(r); +infinity at r = 0 when m > 1.
    double eta_prime(double r) const;

private:
    double m_;
};

double phi(double m, double r);
double eta(double m, double r);
double j_primitive(double m, double r);

/// The unique s with s + mu * eta(s) = r, i.e. (1 + mu eta)^{-1} r.
double scalar_resolvent(const PowerLaw& nl, double mu, double r);
double scalar_resolvent(double m, double mu, double r);

/// Yosida approximation eta_mu(r) = (r - J_mu r) / mu, evaluated as eta(J_mu r).
double yosida(const PowerLaw& nl, double mu, double r);
double yosida(double m, double mu, double r);
/// d/dr eta_mu(r), in [0, 1/mu].
double yosida_derivative(const PowerLaw& nl, double mu, double r);

/// Defaults for the resolvent solve; every field is echoed into reports.
struct ProxOptions {
    double tolerance = 1e-10;        ///< required H_{-1} residual of u + tau D phi(u) = f
    double mu_initial = 1.0;         ///< first Yosida parameter of the continuation
    double mu_factor = 0.1;          ///< mu_{k+1} = mu_factor * mu_k
    double mu_final = 1e-12;         ///< last Yosida parameter
    double stage_tolerance = 1e-9;   ///< relative max-norm of G(w) accepted before shrinking mu
    int max_newton_per_stage = 80;
    int max_halvings = 60;
    double armijo = 1e-4;            ///< sufficient-decrease constant on ||G||^2
};

struct ProxResult {
    GridFunction u;
    GridFunction w;                      ///< phi(u) up to mu_final |u|
    double residual_hminus1 = 0.0;       ///< ||u + tau D phi(u) - f||_{H_{-1}}
    double constraint_gap = 0.0;         ///< max_a |w(a) - phi(u(a))|
    int newton_iterations = 0;
    std::vector<double> mu_path;
    std::vector<double> residual_history; ///< max-norm of G(w) after each Newton update
};

/// Solves u + tau D_N^alpha phi(u) = f for real f: one implicit Euler step, i.e. the
/// resolvent of the operator u -> D phi(u) in H_{-1}.
///
/// The unknown is w = phi(u). The Yosida-regularized system
///   eta_mu(w) + tau D w = f
/// has Jacobian diag(eta_mu'(w)) + tau D, symmetric positive definite since
/// eta_mu' in [0, 1/mu] and D >= lambda0. It is solved by damped Newton with a dense
/// Cholesky factorization, warm-started along a decreasing mu schedule; finally
/// u is f - tau D w or eta(w), whichever has the smaller residual. D is assembled from the kernel form, independently of the symbol
/// table that defines the H_{-1} norm.
class ProxSolver {
public:
    ProxSolver(const VladimirovOperator& op, PowerLaw nl, double tau, ProxOptions options = {});
    ~ProxSolver();
    ProxSolver(const ProxSolver&);
    ProxSolver& operator=(const ProxSolver&);
    ProxSolver(ProxSolver&&) noexcept;
    ProxSolver& operator=(ProxSolver&&) noexcept;

    /// Throws ConvergenceError when the residual contract cannot be met.
    ProxResult solve(const GridFunction& f) const;

    double tau() const noexcept { return tau_; }
    const PowerLaw& nonlinearity() const noexcept { return nl_; }
    const ProxOptions& options() const noexcept { return options_; }
    const VladimirovOperator& op() const noexcept { return op_; }

private:
    struct Matrix;

    VladimirovOperator op_;
    PowerLaw nl_;
    double tau_;
    ProxOptions options_;
    std::shared_ptr<const Matrix> tau_d_;
};

ProxResult prox_step(const VladimirovOperator& op, const PowerLaw& nl, double tau, const GridFunction& f,
                     const ProxOptions& options = {});

/// Psi(f) = int_{B_N} j(f(x)) dx.
double psi_functional(const GridFunction& f, const PowerLaw& nl);

/// Pointwise phi applied to the real part.
GridFunction apply_phi(const GridFunction& u, const PowerLaw& nl);

struct SubdifferentialCheck {
    double gap = 0.0;                   ///< max_a |(D^{-1} f)(a) - phi(u(a))|
    double min_subgradient_margin = 0.0;///< min over probes of Psi(v) - Psi(u) - (f, v - u)_{H_{-1}}
    int probes = 0;
};

/// Checks f in dPsi(u): the pointwise characterization D^{-1} f = phi(u) and the
/// subgradient inequality on random probes v around u.
SubdifferentialCheck verify_subdifferential(const GridFunction& u, const GridFunction& f, const VladimirovOperator& op,
                                            const PowerLaw& nl, int probes = 100, std::uint64_t seed = 1);

}  // namespace padic
