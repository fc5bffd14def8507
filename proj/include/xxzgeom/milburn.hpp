#pragma once

// Intrinsic-decoherence (Milburn) dynamics of the two-spin density matrix.
//
//   d rho / dt = -i [H, rho] - kappa [H, [H, rho]]
//
// Three independent routes are provided: the spectral propagator, the
// closed-form solution for the |du><du| initial state, and classical RK4 on
// the master equation. They are meant to be checked against each other.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cmat.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "xxz_model.hpp"

namespace xxzgeom {

struct DensityMatrix {
    CMat4 mat;

    /// |du><du|, the initial state used throughout.
    static DensityMatrix initial() { return pure(basis::ket(basis::kDownUp)); }

    static DensityMatrix pure(const Vec4& ket) {
        const double n = norm(ket);
        Vec4 k = ket;
        for (auto& v : k) v /= n;
        return DensityMatrix{outer(k, k)};
    }

    cplx operator()(std::size_t r, std::size_t c) const { return mat(r, c); }
};

struct DensityDefects {
    double hermiticity = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
};

inline DensityDefects density_defects(const DensityMatrix& d) {
    DensityDefects out;
    out.hermiticity = hermiticity_defect(d.mat);
    out.trace_error = std::abs(trace(d.mat) - 1.0);
    out.min_eigenvalue = eig_hermitian(hermitian_part(d.mat)).values[0];
    return out;
}

inline bool is_valid_density(const DensityMatrix& d, double tol = 1e-10, double psdTol = 1e-9) {
    const DensityDefects f = density_defects(d);
    return f.hermiticity <= tol && f.trace_error <= tol && f.min_eigenvalue >= -psdTol;
}

inline double purity(const DensityMatrix& d) { return hs_inner(d.mat, d.mat).real(); }

inline double energy_expectation(const ModelParams& p, const DensityMatrix& d) {
    return trace(build_hamiltonian(p) * d.mat).real();
}

/// kappa in -kappa [H, [H, rho]].
inline double decoherence_rate(const ModelParams& p) {
    if (p.noise_alpha < 0.0) throw PreconditionError("decoherence_rate: noise rate alpha must be >= 0");
    switch (p.convention) {
        case RateConvention::PaperConsistent:
            return 0.5 * p.noise_alpha;
        case RateConvention::LiteralInverse:
            if (p.noise_alpha == 0.0) {
                throw DomainError("decoherence_rate: singular rate 1/(2 alpha) at alpha = 0");
            }
            return 0.5 / p.noise_alpha;
    }
    return 0.0;
}

/// Right-hand side of the master equation at rho.
inline CMat4 milburn_generator(const CMat4& h, double kappa, const CMat4& rho) {
    const CMat4 c = commutator(h, rho);
    return -kI * c - kappa * commutator(h, c);
}

inline DensityMatrix propagate_analytic(const ModelParams& p, const DensityMatrix& d0, double t) {
    if (t == 0.0) return d0;
    const Spectrum sp = spectrum(p);
    const double kappa = decoherence_rate(p);

    // Energy-basis elements decay independently.
    CMat4 inEnergyBasis;
    for (std::size_t m = 0; m < 4; ++m) {
        for (std::size_t n = 0; n < 4; ++n) {
            const cplx element = inner(sp.states[m], apply(d0.mat, sp.states[n]));
            if (element == cplx{}) continue;
            const double gap = sp.energies[m] - sp.energies[n];
            inEnergyBasis(m, n) = element * std::exp(cplx(-kappa * gap * gap * t, -gap * t));
        }
    }

    CMat4 out;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 4; ++n)
            if (inEnergyBasis(m, n) != cplx{}) out += inEnergyBasis(m, n) * outer(sp.states[m], sp.states[n]);
    return DensityMatrix{out};
}

/// Closed-form state for the |du><du| initial condition, as a function of eta.
inline DensityMatrix evolved_state_closed_form(const ModelParams& p, double eta) {
    const double envelope = std::exp(-4.0 * p.noise_alpha * p.coupling_J * eta);
    const double c2 = std::cos(2.0 * eta);
    const double s2 = std::sin(2.0 * eta);

    CMat4 m;
    m(1, 1) = 0.5 * (1.0 - envelope * c2);
    m(2, 2) = 0.5 * (1.0 + envelope * c2);
    m(1, 2) = cplx(0.0, -0.5 * envelope * s2);
    m(2, 1) = std::conj(m(1, 2));
    return DensityMatrix{m};
}

/// Smallest RK4 step count that keeps h * max|E_m - E_n|^2 * kappa below 1/2.
inline long rk4_min_steps(const ModelParams& p, double t) {
    const double kappa = decoherence_rate(p);
    const double gap = max_energy_gap(spectrum(p));
    const double stiffness = std::abs(t) * gap * gap * kappa;
    return static_cast<long>(std::floor(stiffness / 0.5)) + 1;
}

inline DensityMatrix propagate_rk4(const ModelParams& p, const DensityMatrix& d0, double t, long nSteps) {
    if (nSteps < 1) throw PreconditionError("propagate_rk4: n_steps must be >= 1");
    const long needed = rk4_min_steps(p, t);
    if (nSteps < needed) {
        std::ostringstream os;
        os << "propagate_rk4: step too large for the damping term; use n_steps >= " << needed;
        throw PreconditionError(os.str());
    }
    if (t == 0.0) return d0;

    const CMat4 h = build_hamiltonian(p);
    const double kappa = decoherence_rate(p);
    const double dt = t / static_cast<double>(nSteps);

    CMat4 rho = d0.mat;
    for (long s = 0; s < nSteps; ++s) {
        const CMat4 k1 = milburn_generator(h, kappa, rho);
        const CMat4 k2 = milburn_generator(h, kappa, rho + (0.5 * dt) * k1);
        const CMat4 k3 = milburn_generator(h, kappa, rho + (0.5 * dt) * k2);
        const CMat4 k4 = milburn_generator(h, kappa, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = hermitian_part(rho);
    }
    return DensityMatrix{rho};
}

enum class Method { Analytic, ClosedForm, RK4 };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Analytic: return "analytic";
        case Method::ClosedForm: return "closed";
        case Method::RK4: return "rk4";
    }
    return "?";
}

struct Trajectory {
    ModelParams params;
    std::vector<double> etas;
    std::vector<DensityMatrix> states;
    Method method = Method::Analytic;

    std::size_t size() const { return etas.size(); }
    double time(std::size_t k) const { return t_of_eta(params, etas[k]); }
};

struct TrajectoryOptions {
    DensityMatrix initial = DensityMatrix::initial();
    /// Total RK4 steps over [0, eta_max]; raised automatically if the
    /// stability guard needs more.
    long rk4_total_steps = 20000;
};

inline std::vector<double> uniform_grid(double upper, std::size_t nPoints) {
    std::vector<double> g(nPoints);
    const double h = upper / static_cast<double>(nPoints - 1);
    for (std::size_t k = 0; k < nPoints; ++k) g[k] = h * static_cast<double>(k);
    g.back() = upper;
    return g;
}

inline Trajectory make_trajectory(const ModelParams& p, double etaMax, std::size_t nPoints, Method method,
                                  const TrajectoryOptions& opts = {}) {
    if (nPoints < 2) throw PreconditionError("make_trajectory: n_points must be >= 2");
    if (!(etaMax > 0.0)) throw PreconditionError("make_trajectory: eta_max must be > 0");

    Trajectory tr;
    tr.params = p;
    tr.method = method;
    tr.etas = uniform_grid(etaMax, nPoints);
    tr.states.resize(nPoints);

    switch (method) {
        case Method::Analytic:
            parallel_for(nPoints, [&](std::size_t k) {
                tr.states[k] = k == 0 ? opts.initial : propagate_analytic(p, opts.initial, t_of_eta(p, tr.etas[k]));
            });
            break;
        case Method::ClosedForm: {
            const CMat4 expected = DensityMatrix::initial().mat;
            if (max_abs_diff(opts.initial.mat, expected) > 1e-14) {
                throw PreconditionError("make_trajectory: the closed form only covers the |du><du| initial state");
            }
            parallel_for(nPoints, [&](std::size_t k) { tr.states[k] = evolved_state_closed_form(p, tr.etas[k]); });
            break;
        }
        case Method::RK4: {
            const double dtInterval = t_of_eta(p, tr.etas[1] - tr.etas[0]);
            const long intervals = static_cast<long>(nPoints - 1);
            long perInterval = (opts.rk4_total_steps + intervals - 1) / intervals;
            perInterval = std::max({perInterval, rk4_min_steps(p, dtInterval), 1L});
            tr.states[0] = opts.initial;
            for (std::size_t k = 1; k < nPoints; ++k) {
                const double dt = t_of_eta(p, tr.etas[k] - tr.etas[k - 1]);
                tr.states[k] = propagate_rk4(p, tr.states[k - 1], dt, perInterval);
            }
            break;
        }
    }
    return tr;
}

/// Eigensystem of a state whose support lies in the {|ud>, |du>} block,
/// solved in closed form on that 2x2 block.
inline HermitianEig<4> block_eigensystem(const DensityMatrix& d) {
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t outerIdx : {basis::kUpUp, basis::kDownDown}) {
            if (std::abs(d(outerIdx, k)) > 1e-12 || std::abs(d(k, outerIdx)) > 1e-12) {
                throw PreconditionError("block_eigensystem: state has weight outside the {|ud>, |du>} block");
            }
        }
    }
    const CMat2 block{d(1, 1), d(1, 2), d(2, 1), d(2, 2)};
    const HermitianEig<2> b = eig_hermitian(block);

    std::array<double, 4> values{0.0, 0.0, b.values[0], b.values[1]};
    std::array<Vec4, 4> vectors{basis::ket(basis::kUpUp), basis::ket(basis::kDownDown),
                                Vec4{0.0, b.vectors[0][0], b.vectors[0][1], 0.0},
                                Vec4{0.0, b.vectors[1][0], b.vectors[1][1], 0.0}};

    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    HermitianEig<4> e;
    for (std::size_t k = 0; k < 4; ++k) {
        e.values[k] = values[order[k]];
        e.vectors[k] = vectors[order[k]];
    }
    return e;
}

/// The density-matrix eigenvalues as printed alongside the closed-form
/// state. They disagree with block_eigensystem except at alpha = 0 and are
/// kept only for the discrepancy report.
struct PrintedEigenvalues {
    double larger = 0.0;
    double smaller = 0.0;
};

inline PrintedEigenvalues printed_density_eigenvalues(const ModelParams& p, double eta) {
    const double aj = p.noise_alpha * p.coupling_J;
    const double c2 = std::cos(2.0 * eta);
    const double root = std::sqrt(0.5 * (1.0 - c2 + std::exp(6.0 * aj * eta) * (1.0 + c2)));
    const double spread = std::exp(-4.0 * aj * eta) * root;
    return {0.5 * (1.0 + spread), 0.5 * (1.0 - spread)};
}

}  // namespace xxzgeom
