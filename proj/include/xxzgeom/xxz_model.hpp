#pragma once

// Two spins with XXZ exchange and a uniform z field.
//
// Basis ordering is {|uu>, |ud>, |du>, |dd>} everywhere; hbar = 1, so energies
// are angular frequencies.

#include <algorithm>
#include <array>
#include <cmath>

#include "cmat.hpp"
#include "errors.hpp"

namespace xxzgeom {

/// How the noise rate alpha enters the double-commutator damping term
/// -kappa [H, [H, rho]].
enum class RateConvention {
    /// kappa = alpha / 2. Reproduces the exp(-4 alpha J eta) decay used by every
    /// closed form downstream; the default.
    PaperConsistent,
    /// kappa = 1 / (2 alpha), the coefficient as literally typeset in the
    /// master equation. Singular at alpha = 0.
    LiteralInverse,
};

struct ModelParams {
    double coupling_J = 0.3;
    double anisotropy_gamma = 1.0;
    double field_B = 0.5;
    double noise_alpha = 0.0;
    RateConvention convention = RateConvention::PaperConsistent;
};

struct Spectrum {
    std::array<double, 4> energies{};
    std::array<Vec4, 4> states{};
};

namespace basis {
inline constexpr std::size_t kUpUp = 0;
inline constexpr std::size_t kUpDown = 1;
inline constexpr std::size_t kDownUp = 2;
inline constexpr std::size_t kDownDown = 3;

inline Vec4 ket(std::size_t index) {
    Vec4 v{};
    v[index] = 1.0;
    return v;
}
}  // namespace basis

inline CMat4 build_hamiltonian(const ModelParams& p) {
    const double g = p.anisotropy_gamma;
    const double b = p.field_B;
    CMat4 h = CMat4::diagonal({g + 2.0 * b, -g, -g, g - 2.0 * b});
    h(1, 2) = 2.0 * p.coupling_J;
    h(2, 1) = 2.0 * p.coupling_J;
    return h;
}

/// Exact spectrum: |uu>, the triplet and singlet combinations of the
/// antiparallel pair, then |dd>, in that order (not sorted by energy).
inline Spectrum spectrum(const ModelParams& p) {
    const double g = p.anisotropy_gamma;
    const double b = p.field_B;
    const double j = p.coupling_J;
    const double s = 1.0 / std::sqrt(2.0);

    Spectrum sp;
    sp.energies = {g + 2.0 * b, -g + 2.0 * j, -g - 2.0 * j, g - 2.0 * b};
    sp.states[0] = basis::ket(basis::kUpUp);
    sp.states[1] = Vec4{0.0, s, s, 0.0};
    sp.states[2] = Vec4{0.0, s, -s, 0.0};
    sp.states[3] = basis::ket(basis::kDownDown);
    return sp;
}

/// Largest energy gap max |E_m - E_n|.
inline double max_energy_gap(const Spectrum& sp) {
    double lo = sp.energies[0];
    double hi = sp.energies[0];
    for (double e : sp.energies) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return hi - lo;
}

/// Dimensionless time eta = 2 J t.
inline double eta_of_t(const ModelParams& p, double t) { return 2.0 * p.coupling_J * t; }

inline double t_of_eta(const ModelParams& p, double eta) {
    if (p.coupling_J == 0.0) {
        throw DomainError("t_of_eta: coupling J = 0 makes eta independent of time");
    }
    return eta / (2.0 * p.coupling_J);
}

}  // namespace xxzgeom
