#pragma once

// Fixed-size dense complex matrices for the two-spin problem.
//
// Only the 2x2 (single spin) and 4x4 (two spins) cases are needed, so the
// dimension is a template parameter and mismatched products fail to compile.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace xxzgeom {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

template <std::size_t N>
class Matrix {
    static_assert(N == 2 || N == 4, "only single-spin and two-spin matrices are supported");

public:
    static constexpr std::size_t dim = N;

    constexpr Matrix() = default;

    /// Row-major entries; the list must have exactly N*N values.
    Matrix(std::initializer_list<cplx> rowMajor) {
        if (rowMajor.size() != N * N) {
            throw std::invalid_argument("Matrix: expected " + std::to_string(N * N) + " entries");
        }
        std::size_t k = 0;
        for (const cplx& v : rowMajor) data_[k++] = v;
    }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const std::array<double, N>& d) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

    const std::array<cplx, N * N>& entries() const { return data_; }
    std::array<cplx, N * N>& entries() { return data_; }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= cplx(s); }
    friend Matrix operator*(Matrix a, double s) { return a *= cplx(s); }
    friend Matrix operator-(Matrix a) { return a *= cplx(-1.0); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix r;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
            }
        }
        return r;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::array<cplx, N * N> data_{};
};

using CMat2 = Matrix<2>;
using CMat4 = Matrix<4>;

template <std::size_t N>
using Vector = std::array<cplx, N>;

using Vec4 = Vector<4>;

namespace pauli {

inline CMat2 identity() { return CMat2::identity(); }
inline CMat2 x() { return CMat2{0.0, 1.0, 1.0, 0.0}; }
inline CMat2 y() { return CMat2{0.0, -kI, kI, 0.0}; }
inline CMat2 z() { return CMat2{1.0, 0.0, 0.0, -1.0}; }

}  // namespace pauli

template <std::size_t N>
Matrix<N> adjoint(const Matrix<N>& a) {
    Matrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

/// Entrywise complex conjugate (no transpose).
template <std::size_t N>
Matrix<N> conjugate(const Matrix<N>& a) {
    Matrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(a(i, j));
    return r;
}

template <std::size_t N>
Matrix<N> matmul(const Matrix<N>& a, const Matrix<N>& b) {
    return a * b;
}

template <std::size_t N>
Matrix<N> commutator(const Matrix<N>& a, const Matrix<N>& b) {
    return a * b - b * a;
}

/// Kronecker product in the basis {|uu>, |ud>, |du>, |dd>}: the first factor
/// acts on the left spin.
inline CMat4 kron(const CMat2& a, const CMat2& b) {
    CMat4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

template <std::size_t N>
cplx trace(const Matrix<N>& a) {
    cplx t{};
    for (std::size_t i = 0; i < N; ++i) t += a(i, i);
    return t;
}

/// Hilbert-Schmidt form Tr(a^dagger b).
template <std::size_t N>
cplx hs_inner(const Matrix<N>& a, const Matrix<N>& b) {
    cplx s{};
    for (std::size_t k = 0; k < N * N; ++k) s += std::conj(a.entries()[k]) * b.entries()[k];
    return s;
}

template <std::size_t N>
double frobenius_norm(const Matrix<N>& a) {
    double s = 0.0;
    for (const cplx& v : a.entries()) s += std::norm(v);
    return std::sqrt(s);
}

template <std::size_t N>
double max_abs_entry(const Matrix<N>& a) {
    double m = 0.0;
    for (const cplx& v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
    return max_abs_entry(a - b);
}

template <std::size_t N>
double hermiticity_defect(const Matrix<N>& a) {
    return max_abs_entry(a - adjoint(a));
}

/// (A + A^dagger) / 2
template <std::size_t N>
Matrix<N> hermitian_part(const Matrix<N>& a) {
    return 0.5 * (a + adjoint(a));
}

template <std::size_t N>
cplx inner(const Vector<N>& a, const Vector<N>& b) {
    cplx s{};
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

template <std::size_t N>
double norm(const Vector<N>& v) {
    return std::sqrt(std::real(inner(v, v)));
}

template <std::size_t N>
Vector<N> apply(const Matrix<N>& a, const Vector<N>& v) {
    Vector<N> r{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r[i] += a(i, j) * v[j];
    return r;
}

/// |a><b|
template <std::size_t N>
Matrix<N> outer(const Vector<N>& a, const Vector<N>& b) {
    Matrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = a[i] * std::conj(b[j]);
    return r;
}

inline Vec4 kron(const Vector<2>& a, const Vector<2>& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

}  // namespace xxzgeom
