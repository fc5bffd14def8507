#pragma once

// Hermitian eigendecomposition and PSD square roots for 2x2 and 4x4 matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "cmat.hpp"
#include "errors.hpp"

namespace xxzgeom {

template <std::size_t N>
struct HermitianEig {
    std::array<double, N> values{};      ///< ascending
    std::array<Vector<N>, N> vectors{};  ///< vectors[k] pairs with values[k]

    Matrix<N> reconstruct() const {
        Matrix<N> r;
        for (std::size_t k = 0; k < N; ++k) r += values[k] * outer(vectors[k], vectors[k]);
        return r;
    }
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdRejectTol = 1e-8;

namespace detail {

template <std::size_t N>
void require_hermitian(const Matrix<N>& a) {
    const double defect = hermiticity_defect(a);
    if (defect > kHermitianTol) {
        std::ostringstream os;
        os << "eig_hermitian: input is not Hermitian (defect " << defect << ")";
        throw PreconditionError(os.str());
    }
}

inline HermitianEig<2> eig2(const CMat2& a) {
    const double p = a(0, 0).real();
    const double d = a(1, 1).real();
    const cplx b = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
    const double mean = 0.5 * (p + d);
    const double half = 0.5 * (p - d);
    const double radius = std::hypot(half, std::abs(b));

    HermitianEig<2> e;
    e.values = {mean - radius, mean + radius};
    if (radius == 0.0) {
        e.vectors = {Vector<2>{1.0, 0.0}, Vector<2>{0.0, 1.0}};
        return e;
    }
    // Upper eigenvector from whichever row of (A - lambda) is better conditioned.
    const double lambda = e.values[1];
    Vector<2> r1{b, lambda - p};
    Vector<2> r2{lambda - d, std::conj(b)};
    Vector<2> hi = norm(r1) >= norm(r2) ? r1 : r2;
    const double n = norm(hi);
    hi[0] /= n;
    hi[1] /= n;
    e.vectors[1] = hi;
    e.vectors[0] = {-std::conj(hi[1]), std::conj(hi[0])};
    return e;
}

// Cyclic complex Jacobi. Each rotation removes the phase of a(p,q) and then
// applies the real Jacobi rotation that annihilates it.
template <std::size_t N>
HermitianEig<N> jacobi(Matrix<N> a) {
    Matrix<N> v = Matrix<N>::identity();
    const double scale = std::max(frobenius_norm(a), 1e-300);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-17 * scale) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const cplx apq = a(p, q);
                const double g = std::abs(apq);
                if (g <= 1e-300) continue;
                const cplx phase = apq / g;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J = diag-phase * real rotation, acting on columns p and q.
                const cplx jpp = c;
                const cplx jpq = s;
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);

                for (std::size_t k = 0; k < N; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (std::size_t k = 0; k < N; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::array<std::size_t, N> order;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEig<N> e;
    for (std::size_t k = 0; k < N; ++k) {
        const std::size_t col = order[k];
        e.values[k] = a(col, col).real();
        for (std::size_t i = 0; i < N; ++i) e.vectors[k][i] = v(i, col);
    }
    return e;
}

}  // namespace detail

/// Eigenpairs of a Hermitian matrix, values ascending. 2x2 inputs use the
/// closed-form quadratic; 4x4 inputs use cyclic Jacobi rotations.
template <std::size_t N>
HermitianEig<N> eig_hermitian(const Matrix<N>& a) {
    detail::require_hermitian(a);
    if constexpr (N == 2) {
        return detail::eig2(a);
    } else {
        return detail::jacobi(hermitian_part(a));
    }
}

/// Principal square root of a positive-semidefinite matrix. Eigenvalues in
/// [-kPsdRejectTol, 0) are treated as round-off and clamped to zero.
template <std::size_t N>
Matrix<N> sqrt_psd(const Matrix<N>& a) {
    const HermitianEig<N> e = eig_hermitian(a);
    Matrix<N> r;
    for (std::size_t k = 0; k < N; ++k) {
        double lambda = e.values[k];
        if (lambda < -kPsdRejectTol) {
            std::ostringstream os;
            os << "sqrt_psd: matrix is not PSD (eigenvalue " << lambda << ")";
            throw PreconditionError(os.str());
        }
        lambda = std::max(lambda, 0.0);
        if (lambda == 0.0) continue;
        r += std::sqrt(lambda) * outer(e.vectors[k], e.vectors[k]);
    }
    return r;
}

/// Factor W with A = W W^dagger: column k is sqrt(lambda_k) times the k-th
/// eigenvector. Same clamping rule as sqrt_psd.
template <std::size_t N>
Matrix<N> psd_factor(const Matrix<N>& a) {
    const HermitianEig<N> e = eig_hermitian(a);
    Matrix<N> w;
    for (std::size_t k = 0; k < N; ++k) {
        const double lambda = e.values[k];
        if (lambda < -kPsdRejectTol) {
            std::ostringstream os;
            os << "psd_factor: matrix is not PSD (eigenvalue " << lambda << ")";
            throw PreconditionError(os.str());
        }
        const double s = std::sqrt(std::max(lambda, 0.0));
        for (std::size_t i = 0; i < N; ++i) w(i, k) = s * e.vectors[k][i];
    }
    return w;
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi. Works on the
/// columns directly instead of forming A^dagger A, so small singular values
/// keep absolute accuracy ~ eps * ||A|| rather than sqrt(eps) * ||A||.
template <std::size_t N>
std::array<double, N> singular_values(Matrix<N> a) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = i + 1; j < N; ++j) {
                double alpha = 0.0;
                double beta = 0.0;
                cplx gamma{};
                for (std::size_t r = 0; r < N; ++r) {
                    alpha += std::norm(a(r, i));
                    beta += std::norm(a(r, j));
                    gamma += std::conj(a(r, i)) * a(r, j);
                }
                const double g = std::abs(gamma);
                if (g <= 1e-300 || g <= 1e-16 * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const cplx phase = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t r = 0; r < N; ++r) {
                    const cplx ai = a(r, i);
                    const cplx aj = a(r, j);
                    a(r, i) = c * ai - s * std::conj(phase) * aj;
                    a(r, j) = s * phase * ai + c * aj;
                }
            }
        }
        if (!rotated) break;
    }
    std::array<double, N> sv{};
    for (std::size_t k = 0; k < N; ++k) {
        double s = 0.0;
        for (std::size_t r = 0; r < N; ++r) s += std::norm(a(r, k));
        sv[k] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace xxzgeom
