#pragma once

// Hilbert-Schmidt and Bures geometry along the decohering trajectory.
//
// The closed forms below take the |du><du| initial state. The HS "distance"
// closed form is the instantaneous rate ||d rho / dt||_HS (per unit of
// laboratory time t); hs_distance is the genuine finite distance.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "cmat.hpp"
#include "eig.hpp"
#include "entanglement.hpp"
#include "errors.hpp"
#include "milburn.hpp"

namespace xxzgeom {

struct GeometrySample {
    double eta = 0.0;
    double concurrence = 0.0;
    double hs_rate = 0.0;        ///< per unit t
    double hs_speed = 0.0;       ///< per unit eta
    double fidelity_sep = 1.0;
    double bures_distance = 0.0;
    double bures_speed = 0.0;
};

namespace detail {
inline void require_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw PreconditionError(std::string(what) + ": argument must lie in [0, 1]");
    }
}

// sqrt(J^2 (4 alpha^2 J^2 + 1))
inline double hs_amplitude(double j, double alpha) {
    return std::sqrt(j * j * (4.0 * alpha * alpha * j * j + 1.0));
}
}  // namespace detail

inline double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
    const CMat4 diff = b.mat - a.mat;
    return std::sqrt(std::max(0.0, hs_inner(diff, diff).real()));
}

/// 2 sqrt(2) exp(-4 alpha J eta) sqrt(J^2 (4 alpha^2 J^2 + 1))
inline double hs_rate_closed_form(const ModelParams& p, double eta) {
    const double j = p.coupling_J;
    const double a = p.noise_alpha;
    return 2.0 * std::numbers::sqrt2 * std::exp(-4.0 * a * j * eta) * detail::hs_amplitude(j, a);
}

/// Same rate written through the concurrence C and its noiseless value
/// c0 = |sin 2 eta|. Requires c0 > 0.
inline double hs_rate_from_concurrence(double j, double alpha, double c, double c0) {
    if (!(c0 > 0.0)) throw PreconditionError("hs_rate_from_concurrence: noiseless concurrence must be > 0");
    return 2.0 * c * std::numbers::sqrt2 / c0 * detail::hs_amplitude(j, alpha);
}

/// Central difference of the analytic trajectory in laboratory time.
inline double hs_rate_numeric(const ModelParams& p, double eta, double deltaT) {
    if (!(deltaT > 0.0)) throw PreconditionError("hs_rate_numeric: delta_t must be > 0");
    const double t = t_of_eta(p, eta);
    const DensityMatrix d0 = DensityMatrix::initial();
    const DensityMatrix plus = propagate_analytic(p, d0, t + deltaT);
    const DensityMatrix minus = propagate_analytic(p, d0, t - deltaT);
    return hs_distance(minus, plus) / (2.0 * deltaT);
}

/// |d/d eta| of the HS rate: 8 sqrt(2) alpha J exp(-4 alpha J eta) sqrt(...).
inline double hs_speed(const ModelParams& p, double eta) {
    const double j = p.coupling_J;
    const double a = p.noise_alpha;
    return 8.0 * std::numbers::sqrt2 * a * j * std::exp(-4.0 * a * j * eta) * detail::hs_amplitude(j, a);
}

/// HS speed through the concurrence, with c0 = |sin 2 eta| > 0.
inline double hs_speed_from_concurrence(double j, double alpha, double c, double c0) {
    if (!(c0 > 0.0)) throw PreconditionError("hs_speed_from_concurrence: noiseless concurrence must be > 0");
    return 8.0 * std::numbers::sqrt2 * alpha * j * c / c0 * detail::hs_amplitude(j, alpha);
}

/// Uhlmann fidelity in the squared convention, [Tr sqrt(sqrt(a) b sqrt(a))]^2.
/// Evaluated as the squared trace norm of Wa^dagger Wb, where a = Wa Wa^dagger
/// and b = Wb Wb^dagger.
inline double fidelity_from_factors(const CMat4& wa, const CMat4& wb) {
    const std::array<double, 4> sv = singular_values(adjoint(wa) * wb);
    const double tr = sv[0] + sv[1] + sv[2] + sv[3];
    return std::min(1.0, tr * tr);
}

inline double fidelity_uhlmann(const DensityMatrix& a, const DensityMatrix& b) {
    return fidelity_from_factors(psd_factor(hermitian_part(a.mat)), psd_factor(hermitian_part(b.mat)));
}

/// Maximal fidelity with the separable set, (1 + sqrt(1 - C^2)) / 2.
inline double fidelity_of_separability(double c) {
    detail::require_unit_interval(c, "fidelity_of_separability");
    return 0.5 * (1.0 + std::sqrt(1.0 - c * c));
}

/// Randomized lower bound on max over separable sigma of F(d, sigma).
///
/// Every candidate is a mixture of four product states. Candidates are either
/// fresh draws (Bloch directions uniform on each sphere, weights flat on the
/// simplex) or Gaussian perturbations of the incumbent with a step size that
/// grows on success and shrinks on failure. The result is the running maximum,
/// so it is non-decreasing in n_samples for a fixed seed.
inline double separable_fidelity_search(const DensityMatrix& d, long nSamples, std::uint64_t seed) {
    if (nSamples < 1) throw PreconditionError("separable_fidelity_search: n_samples must be >= 1");

    constexpr std::size_t kProducts = 4;
    constexpr std::size_t kAngles = 4 * kProducts;
    constexpr std::size_t kParams = kAngles + kProducts;  // + log-weights
    using Params = std::array<double, kParams>;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);

    auto fresh = [&] {
        Params x{};
        for (std::size_t k = 0; k < 2 * kProducts; ++k) {
            x[2 * k] = std::acos(2.0 * unit(rng) - 1.0);
            x[2 * k + 1] = 2.0 * std::numbers::pi * unit(rng);
        }
        for (std::size_t k = 0; k < kProducts; ++k) x[kAngles + k] = std::log(expo(rng) + 1e-300);
        return x;
    };

    auto factor = [](const Params& x) {
        std::array<double, kProducts> w{};
        double wmax = x[kAngles];
        for (std::size_t k = 1; k < kProducts; ++k) wmax = std::max(wmax, x[kAngles + k]);
        double total = 0.0;
        for (std::size_t k = 0; k < kProducts; ++k) total += w[k] = std::exp(x[kAngles + k] - wmax);

        CMat4 w4;
        for (std::size_t k = 0; k < kProducts; ++k) {
            const double* ang = &x[4 * k];
            const Vector<2> left{std::cos(0.5 * ang[0]), std::polar(std::sin(0.5 * ang[0]), ang[1])};
            const Vector<2> right{std::cos(0.5 * ang[2]), std::polar(std::sin(0.5 * ang[2]), ang[3])};
            const Vec4 v = kron(left, right);
            const double s = std::sqrt(w[k] / total);
            for (std::size_t i = 0; i < 4; ++i) w4(i, k) = s * v[i];
        }
        return w4;
    };

    const CMat4 target = psd_factor(hermitian_part(d.mat));
    Params best = fresh();
    double bestFidelity = fidelity_from_factors(target, factor(best));
    double step = 0.5;

    for (long n = 1; n < nSamples; ++n) {
        Params candidate;
        if (unit(rng) < 0.1) {
            candidate = fresh();
        } else {
            candidate = best;
            for (double& v : candidate) v += step * gauss(rng);
        }
        const double f = fidelity_from_factors(target, factor(candidate));
        if (f > bestFidelity) {
            best = candidate;
            bestFidelity = f;
            step *= 1.5;
        } else {
            step *= 0.9872;  // ~0.95^(1/4): one success in five keeps the step steady
        }
        step = std::clamp(step, 1e-4, 1.0);
    }
    return bestFidelity;
}

/// sqrt(2 - 2 sqrt(F))
inline double bures_distance_raw(double f) {
    detail::require_unit_interval(f, "bures_distance_raw");
    return std::sqrt(2.0 - 2.0 * std::sqrt(f));
}

/// Bures distance to the separable set, rescaled so that C = 0 -> 0 and C = 1 -> 1.
inline double bures_distance_normalized(double c) {
    detail::require_unit_interval(c, "bures_distance_normalized");
    const double inner = 2.0 - std::sqrt(2.0 + 2.0 * std::sqrt(1.0 - c * c));
    return std::sqrt(std::max(0.0, inner)) / std::sqrt(2.0 - std::numbers::sqrt2);
}

inline double bures_distance_from_noise(const ModelParams& p, double eta) {
    return bures_distance_normalized(concurrence_closed_form(p, eta));
}

/// (1/4) sqrt(1 + sqrt(1 - C^2)), equal to sqrt(F_sep / 8).
inline double bures_speed(double c) {
    detail::require_unit_interval(c, "bures_speed");
    return 0.25 * std::sqrt(1.0 + std::sqrt(1.0 - c * c));
}

inline GeometrySample geometry_sample(const ModelParams& p, double eta) {
    GeometrySample s;
    s.eta = eta;
    s.concurrence = std::min(1.0, concurrence_closed_form(p, eta));
    s.hs_rate = hs_rate_closed_form(p, eta);
    s.hs_speed = hs_speed(p, eta);
    s.fidelity_sep = fidelity_of_separability(s.concurrence);
    s.bures_distance = bures_distance_normalized(s.concurrence);
    s.bures_speed = bures_speed(s.concurrence);
    return s;
}

}  // namespace xxzgeom
