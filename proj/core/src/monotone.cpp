#include "padic/monotone.hpp"

#include "padic/errors.hpp"
#include "padic/sobolev.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace padic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double signed_power(double r, double exponent) {
    if (r == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(r), exponent), r);
}

// d/dr |r|^{q-1} r = q |r|^{q-1}.
double signed_power_derivative(double r, double exponent) {
    if (r == 0.0) {
        if (exponent > 1.0) return 0.0;
        if (exponent < 1.0) return kInf;
        return 1.0;
    }
    return exponent * std::pow(std::abs(r), exponent - 1.0);
}

Eigen::VectorXd to_eigen(const GridFunction& f) {
    Eigen::VectorXd v(f.size());
    for (std::int64_t a = 0; a < f.size(); ++a) v[a] = f[a].real();
    return v;
}

GridFunction from_eigen(const BallGrid& grid, const Eigen::VectorXd& v) {
    GridFunction f(grid);
    for (std::int64_t a = 0; a < f.size(); ++a) f[a] = v[a];
    return f;
}

}  // namespace

PowerLaw::PowerLaw(double m) : m_(m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigurationError("power-law exponent m must be positive");
}

double PowerLaw::phi(double r) const { return signed_power(r, m_); }
double PowerLaw::eta(double r) const { return signed_power(r, 1.0 / m_); }
double PowerLaw::j(double r) const { return std::pow(std::abs(r), m_ + 1.0) / (m_ + 1.0); }
double PowerLaw::phi_prime(double r) const { return signed_power_derivative(r, m_); }
double PowerLaw::eta_prime(double r) const { return signed_power_derivative(r, 1.0 / m_); }

double phi(double m, double r) { return PowerLaw(m).phi(r); }
double eta(double m, double r) { return PowerLaw(m).eta(r); }
double j_primitive(double m, double r) { return PowerLaw(m).j(r); }

double scalar_resolvent(const PowerLaw& nl, double mu, double r) {
    if (!(mu > 0.0)) throw ConfigurationError("Yosida parameter mu must be positive");
    if (r == 0.0) return 0.0;
    const double target = std::abs(r);
    // g(s) = s + mu eta(s) - target is strictly increasing on [0, target] with g(0) < 0 <= g(target).
    auto g = [&](double s) { return s + mu * nl.eta(s) - target; };
    double lo = 0.0;
    double hi = target;
    // Start from whichever term dominates: s ~ target or mu eta(s) ~ target.
    double s = std::min(target, signed_power(target / mu, nl.exponent()));
    const double tol = 1e-15 * (1.0 + target);
    for (int it = 0; it < 300; ++it) {
        const double gs = g(s);
        if (std::abs(gs) <= tol) break;
        if (gs > 0.0) hi = s; else lo = s;
        const double dg = 1.0 + mu * nl.eta_prime(s);
        double next = std::isfinite(dg) ? s - gs / dg : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s || hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
            s = next;
            break;
        }
        s = next;
    }
    return std::copysign(s, r);
}

double scalar_resolvent(double m, double mu, double r) { return scalar_resolvent(PowerLaw(m), mu, r); }

double yosida(const PowerLaw& nl, double mu, double r) {
    // eta(J_mu r) equals (r - J_mu r) / mu without the cancellation of the difference quotient.
    return nl.eta(scalar_resolvent(nl, mu, r));
}

double yosida(double m, double mu, double r) { return yosida(PowerLaw(m), mu, r); }

double yosida_derivative(const PowerLaw& nl, double mu, double r) {
    const double s = scalar_resolvent(nl, mu, r);
    const double d = nl.eta_prime(s);
    if (!std::isfinite(d)) return 1.0 / mu;
    return d / (1.0 + mu * d);
}

struct ProxSolver::Matrix {
    Eigen::MatrixXd tau_d;
};

ProxSolver::ProxSolver(const VladimirovOperator& op, PowerLaw nl, double tau, ProxOptions options)
    : op_(op), nl_(nl), tau_(tau), options_(options) {
    if (!(tau > 0.0)) throw ConfigurationError("time step tau must be positive");
    if (!(options_.mu_final > 0.0 && options_.mu_initial >= options_.mu_final && options_.mu_factor > 0.0 &&
          options_.mu_factor < 1.0)) {
        throw ConfigurationError("invalid Yosida schedule");
    }
    const std::int64_t M = op.grid().size();
    const auto& stencil = op.kernel_stencil();
    auto mat = std::make_shared<Matrix>();
    mat->tau_d.resize(M, M);
    for (std::int64_t a = 0; a < M; ++a) {
        for (std::int64_t c = 0; c < M; ++c) {
            const std::int64_t k = a >= c ? a - c : a - c + M;
            mat->tau_d(a, c) = tau * stencil[static_cast<std::size_t>(k)];
        }
    }
    tau_d_ = std::move(mat);
}

ProxSolver::~ProxSolver() = default;
ProxSolver::ProxSolver(const ProxSolver&) = default;
ProxSolver& ProxSolver::operator=(const ProxSolver&) = default;
ProxSolver::ProxSolver(ProxSolver&&) noexcept = default;
ProxSolver& ProxSolver::operator=(ProxSolver&&) noexcept = default;

ProxResult ProxSolver::solve(const GridFunction& f) const {
    const auto& grid = op_.grid();
    if (!(f.grid() == grid)) throw std::invalid_argument("prox_step: right-hand side lives on a different grid");
    const double f_scale = std::max(1.0, [&] {
        double m = 0.0;
        for (const auto& z : f.values()) m = std::max(m, std::abs(z));
        return m;
    }());
    if (f.max_imag() > 1e-12 * f_scale) throw std::invalid_argument("prox_step: right-hand side must be real-valued");

    const Eigen::MatrixXd& tau_d = tau_d_->tau_d;
    const Eigen::VectorXd rhs = to_eigen(f);
    const std::int64_t M = grid.size();

    ProxResult result{GridFunction(grid), GridFunction(grid), 0.0, 0.0, 0, {}, {}};
    Eigen::VectorXd w = Eigen::VectorXd::Zero(M);
    Eigen::VectorXd eta_w(M), deriv(M), G(M);

    auto evaluate = [&](const Eigen::VectorXd& x, double mu, Eigen::VectorXd& out_eta, Eigen::VectorXd* out_deriv) {
        for (std::int64_t a = 0; a < M; ++a) {
            const double s = scalar_resolvent(nl_, mu, x[a]);
            out_eta[a] = nl_.eta(s);
            if (out_deriv) {
                const double d = nl_.eta_prime(s);
                (*out_deriv)[a] = std::isfinite(d) ? d / (1.0 + mu * d) : 1.0 / mu;
            }
        }
        return Eigen::VectorXd(out_eta + tau_d * x - rhs);
    };

    auto residual_of = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd phi_u(M);
        for (std::int64_t a = 0; a < M; ++a) phi_u[a] = nl_.phi(u[a]);
        const Eigen::VectorXd r = u + tau_d * phi_u - rhs;
        return hminus1_norm(from_eigen(grid, r), op_);
    };
    // Two ways back from w to u: f - tau D w, and eta(w). The first cancels badly when u is
    // tiny compared to f (fast diffusion near extinction), the second when eta is steep at 0
    // (m > 1). Keep whichever satisfies the step equation better.
    auto true_residual = [&](const Eigen::VectorXd& wv, Eigen::VectorXd& u_out) {
        u_out = rhs - tau_d * wv;
        Eigen::VectorXd u_eta(M);
        for (std::int64_t a = 0; a < M; ++a) u_eta[a] = nl_.eta(wv[a]);
        const double r_lin = residual_of(u_out);
        const double r_eta = residual_of(u_eta);
        if (r_eta < r_lin) {
            u_out = u_eta;
            return r_eta;
        }
        return r_lin;
    };

    std::vector<double> schedule;
    for (double mu = options_.mu_initial; mu > options_.mu_final * (1.0 + 1e-9); mu *= options_.mu_factor) {
        schedule.push_back(mu);
    }
    schedule.push_back(options_.mu_final);

    Eigen::VectorXd u_vec(M);
    double residual = kInf;
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd eta_trial(M);

    for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
        const double mu = schedule[stage];
        const bool final_stage = stage + 1 == schedule.size();
        result.mu_path.push_back(mu);
        G = evaluate(w, mu, eta_w, &deriv);
        for (int it = 0; it < options_.max_newton_per_stage; ++it) {
            const double g_inf = G.lpNorm<Eigen::Infinity>();
            if (!final_stage && g_inf <= options_.stage_tolerance * f_scale) break;
            if (final_stage && g_inf <= 1e-11 * f_scale) {
                residual = true_residual(w, u_vec);
                if (residual <= 1e-2 * options_.tolerance || g_inf <= 1e-15 * f_scale) break;
            }
            Eigen::MatrixXd J = tau_d;
            J.diagonal() += deriv;
            llt.compute(J);
            Eigen::VectorXd step;
            if (llt.info() == Eigen::Success) {
                step = llt.solve(-G);
            } else {
                step = J.ldlt().solve(-G);
            }
            const double g2 = G.squaredNorm();
            double t = 1.0;
            bool accepted = false;
            Eigen::VectorXd trial, G_trial;
            for (int h = 0; h <= options_.max_halvings; ++h) {
                trial = w + t * step;
                G_trial = evaluate(trial, mu, eta_trial, nullptr);
                if (G_trial.squaredNorm() <= (1.0 - 2.0 * options_.armijo * t) * g2) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            ++result.newton_iterations;
            if (!accepted) break;  // no further decrease representable at this mu
            w = trial;
            G = evaluate(w, mu, eta_w, &deriv);
            result.residual_history.push_back(G.lpNorm<Eigen::Infinity>());
        }
    }

    residual = true_residual(w, u_vec);
    result.u = from_eigen(grid, u_vec);
    result.w = from_eigen(grid, w);
    result.residual_hminus1 = residual;
    for (std::int64_t a = 0; a < M; ++a) {
        result.constraint_gap = std::max(result.constraint_gap, std::abs(w[a] - nl_.phi(u_vec[a])));
    }
    if (!(residual <= options_.tolerance)) {
        std::ostringstream msg;
        msg << "prox_step did not converge: H_{-1} residual " << residual << " > " << options_.tolerance
            << " after " << result.newton_iterations << " Newton iterations (m=" << nl_.exponent() << ", tau=" << tau_
            << ")";
        throw ConvergenceError(msg.str(), result.residual_history);
    }
    return result;
}

ProxResult prox_step(const VladimirovOperator& op, const PowerLaw& nl, double tau, const GridFunction& f,
                     const ProxOptions& options) {
    return ProxSolver(op, nl, tau, options).solve(f);
}

double psi_functional(const GridFunction& f, const PowerLaw& nl) {
    double acc = 0.0;
    for (const auto& z : f.values()) acc += nl.j(z.real());
    return acc * f.grid().haar_weight();
}

GridFunction apply_phi(const GridFunction& u, const PowerLaw& nl) {
    GridFunction out(u.grid());
    for (std::int64_t a = 0; a < u.size(); ++a) out[a] = nl.phi(u[a].real());
    return out;
}

SubdifferentialCheck verify_subdifferential(const GridFunction& u, const GridFunction& f, const VladimirovOperator& op,
                                            const PowerLaw& nl, int probes, std::uint64_t seed) {
    SubdifferentialCheck out;
    const auto w = op.apply_inverse(f);
    for (std::int64_t a = 0; a < u.size(); ++a) {
        out.gap = std::max(out.gap, std::abs(w[a] - nl.phi(u[a].real())));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double psi_u = psi_functional(u, nl);
    out.min_subgradient_margin = kInf;
    for (int i = 0; i < probes; ++i) {
        // Probe scales from 1e-3 to 1 around u.
        const double scale = std::pow(10.0, -3.0 * (i % 4) / 3.0);
        GridFunction v = u;
        for (std::int64_t a = 0; a < v.size(); ++a) v[a] = v[a].real() + scale * unit(rng);
        const double pairing = hminus1_inner(f, v - u, op).real();
        out.min_subgradient_margin = std::min(out.min_subgradient_margin, psi_functional(v, nl) - psi_u - pairing);
        ++out.probes;
    }
    if (probes == 0) out.min_subgradient_margin = 0.0;
    return out;
}

}  // namespace padic
