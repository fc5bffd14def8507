#pragma once

// Wootters concurrence of a two-qubit state.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "cmat.hpp"
#include "eig.hpp"
#include "milburn.hpp"

namespace xxzgeom {

struct ConcurrenceBreakdown {
    std::array<double, 4> lambdas{};  ///< descending
    double value = 0.0;
};

inline const CMat4& sigma_yy() {
    static const CMat4 yy = kron(pauli::y(), pauli::y());
    return yy;
}

/// rho (Y x Y) rho* (Y x Y). Not Hermitian in general.
inline CMat4 spin_flip(const DensityMatrix& d) {
    return d.mat * sigma_yy() * conjugate(d.mat) * sigma_yy();
}

/// The lambdas are the square roots of the spin-flip product's eigenvalues.
/// With rho = W W^dagger they equal the singular values of W^T (YY) W, which
/// are computed directly; squaring first would turn 1e-17 round-off into
/// 1e-9 errors in the small lambdas.
inline ConcurrenceBreakdown concurrence_wootters(const DensityMatrix& d) {
    const CMat4 w = psd_factor(hermitian_part(d.mat));
    CMat4 wt;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) wt(i, j) = w(j, i);
    const CMat4 tau = wt * sigma_yy() * w;

    ConcurrenceBreakdown out;
    out.lambdas = singular_values(tau);
    out.value = std::max(0.0, out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3]);
    return out;
}

/// exp(-4 alpha J eta) |sin 2 eta| for the |du><du| initial state.
inline double concurrence_closed_form(const ModelParams& p, double eta) {
    return std::exp(-4.0 * p.noise_alpha * p.coupling_J * eta) * std::abs(std::sin(2.0 * eta));
}

}  // namespace xxzgeom
