#pragma once

// Minimal-time construction from the HS rate at maximal entanglement divided
// by the maximal HS speed, t_min = 1 / (4 J alpha).
//
// The ratio mixes a per-t rate with a per-eta speed; it is reproduced as
// stated. What can be checked physically is the state reached at t_min and
// that it obeys the master equation there.

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "geometry.hpp"
#include "milburn.hpp"

namespace xxzgeom {

struct BrachistochroneResult {
    double v_hs_max = 0.0;     ///< per unit eta
    double l_hs_at_c1 = 0.0;   ///< per unit t
    double t_min = 0.0;
    double eta_at_t_min = 0.0;
    DensityMatrix optimal_state;
    double milburn_residual = 0.0;
    /// Largest closed-form HS speed seen on a dense eta scan over [0, pi/2].
    double v_hs_scan_sup = 0.0;
    double v_hs_scan_argmax = 0.0;
};

namespace detail {
inline void require_decoherence(const ModelParams& p, const char* what) {
    if (!(p.noise_alpha > 0.0)) {
        throw DomainError(std::string(what) +
                          ": no finite optimum, the brachistochrone time diverges without decoherence (alpha = 0)");
    }
}
}  // namespace detail

/// 8 J^2 sqrt(2) alpha sqrt(4 alpha^2 J^2 + 1), the speed at C = 1, eta = pi/4.
inline double v_hs_max(const ModelParams& p) {
    const double j = p.coupling_J;
    const double a = p.noise_alpha;
    return 8.0 * j * j * std::numbers::sqrt2 * a * std::sqrt(4.0 * a * a * j * j + 1.0);
}

/// 2 J sqrt(2) sqrt(4 alpha^2 J^2 + 1)
inline double l_hs_at_c1(const ModelParams& p) {
    const double j = p.coupling_J;
    const double a = p.noise_alpha;
    return 2.0 * j * std::numbers::sqrt2 * std::sqrt(4.0 * a * a * j * j + 1.0);
}

inline double t_min(const ModelParams& p) {
    detail::require_decoherence(p, "t_min");
    if (p.coupling_J == 0.0) throw DomainError("t_min: coupling J must be non-zero");
    return 1.0 / (4.0 * p.coupling_J * p.noise_alpha);
}

/// The optimal state exactly as printed: block diagonal
/// (1 +/- exp(-2J) cos(1/alpha)) / 2, coherence -(i/2) exp(-2J) sin(1/alpha).
///
/// NOTE: the printed diagonal is swapped relative to the propagated state at
/// t_min, which has (1 -/+ exp(-2J) cos(1/alpha)) / 2. The coherence agrees.
inline DensityMatrix optimal_state(const ModelParams& p) {
    detail::require_decoherence(p, "optimal_state");
    const double envelope = std::exp(-2.0 * p.coupling_J);
    const double c = std::cos(1.0 / p.noise_alpha);
    const double s = std::sin(1.0 / p.noise_alpha);
    CMat4 m;
    m(1, 1) = 0.5 * (1.0 + envelope * c);
    m(2, 2) = 0.5 * (1.0 - envelope * c);
    m(1, 2) = cplx(0.0, -0.5 * envelope * s);
    m(2, 1) = std::conj(m(1, 2));
    return DensityMatrix{m};
}

/// || central-difference d rho/dt - generator(rho(t)) ||_HS along the
/// analytic trajectory from |du><du|.
inline double milburn_residual(const ModelParams& p, double t, double delta = 1e-6) {
    const DensityMatrix d0 = DensityMatrix::initial();
    const DensityMatrix plus = propagate_analytic(p, d0, t + delta);
    const DensityMatrix minus = propagate_analytic(p, d0, t - delta);
    const DensityMatrix here = propagate_analytic(p, d0, t);
    const CMat4 numeric = (1.0 / (2.0 * delta)) * (plus.mat - minus.mat);
    const CMat4 generator = milburn_generator(build_hamiltonian(p), decoherence_rate(p), here.mat);
    const CMat4 diff = numeric - generator;
    return std::sqrt(hs_inner(diff, diff).real());
}

inline BrachistochroneResult solve_brachistochrone(const ModelParams& p, std::size_t scanPoints = 20001) {
    BrachistochroneResult r;
    r.t_min = t_min(p);
    r.v_hs_max = v_hs_max(p);
    r.l_hs_at_c1 = l_hs_at_c1(p);
    r.eta_at_t_min = eta_of_t(p, r.t_min);
    r.optimal_state = optimal_state(p);
    r.milburn_residual = milburn_residual(p, r.t_min);

    const std::vector<double> grid = uniform_grid(0.5 * std::numbers::pi, scanPoints);
    for (double eta : grid) {
        const double v = hs_speed(p, eta);
        if (v > r.v_hs_scan_sup) {
            r.v_hs_scan_sup = v;
            r.v_hs_scan_argmax = eta;
        }
    }
    return r;
}

}  // namespace xxzgeom
