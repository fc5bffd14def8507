#include <gtest/gtest.h>

#include <numbers>

#include "xxzgeom/geometry.hpp"

using namespace xxzgeom;

namespace {
ModelParams params(double j, double a) {
    ModelParams p;
    p.coupling_J = j;
    p.noise_alpha = a;
    return p;
}
DensityMatrix bell() { return DensityMatrix::pure(Vec4{0.0, 1.0, 1.0, 0.0}); }
}  // namespace

TEST(HsDistance, Examples) {
    const DensityMatrix a = DensityMatrix::initial();
    EXPECT_EQ(hs_distance(a, a), 0.0);
    const DensityMatrix up = DensityMatrix::pure(basis::ket(basis::kUpUp));
    const DensityMatrix down = DensityMatrix::pure(basis::ket(basis::kDownDown));
    EXPECT_NEAR(hs_distance(up, down), std::numbers::sqrt2, 1e-15);
    const DensityMatrix b = evolved_state_closed_form(params(0.3, 0.1), 1.3);
    EXPECT_EQ(hs_distance(a, b), hs_distance(b, a));
}

TEST(HsRate, ClosedFormValues) {
    EXPECT_NEAR(hs_rate_closed_form(params(0.5, 0.05), 1.0), 1.2812318915, 1e-9);
    for (double eta : {0.0, 1.0, 4.0}) EXPECT_NEAR(hs_rate_closed_form(params(0.3, 0.0), eta), 2.0 * std::numbers::sqrt2 * 0.3, 1e-15);
    const double c = concurrence_closed_form(params(0.5, 0.05), 1.0);
    EXPECT_NEAR(hs_rate_from_concurrence(0.5, 0.05, c, std::abs(std::sin(2.0))), 1.2812318915, 1e-9);
    EXPECT_THROW(hs_rate_from_concurrence(0.5, 0.05, 0.0, 0.0), PreconditionError);
}

TEST(HsRate, NumericOracle) {
    const ModelParams p = params(0.5, 0.05);
    EXPECT_NEAR(hs_rate_numeric(p, 1.0, 1e-6) / hs_rate_closed_form(p, 1.0), 1.0, 1e-6);
    const ModelParams clean = params(0.3, 0.0);
    const double r0 = hs_rate_numeric(clean, 0.5, 1e-6);
    for (double eta : {1.0, 2.0, 3.0}) EXPECT_NEAR(hs_rate_numeric(clean, eta, 1e-6) / r0, 1.0, 1e-6);
    const double perJ = hs_rate_numeric(params(0.2, 0.0), 1.0, 1e-6) / 0.2;
    EXPECT_NEAR(hs_rate_numeric(params(0.7, 0.0), 1.0, 1e-6) / 0.7 / perJ, 1.0, 1e-6);
    EXPECT_THROW(hs_rate_numeric(p, 1.0, 0.0), PreconditionError);
}

TEST(HsSpeed, ValuesAndIdentity) {
    EXPECT_NEAR(hs_speed(params(0.5, 0.05), 1.0), 0.12812318915, 1e-10);
    EXPECT_EQ(hs_speed(params(0.5, 0.0), 1.0), 0.0);
    for (double j : {0.1, 0.4, 0.9})
        for (double a : {0.01, 0.1, 0.3})
            for (double eta : {0.2, 1.0, 5.0}) {
                const ModelParams p = params(j, a);
                EXPECT_NEAR(hs_speed(p, eta) / (4.0 * a * j * hs_rate_closed_form(p, eta)), 1.0, 1e-12);
                const double h = 1e-4;
                const double fd = std::abs(hs_rate_closed_form(p, eta + h) - hs_rate_closed_form(p, eta - h)) / (2.0 * h);
                EXPECT_NEAR(fd / hs_speed(p, eta), 1.0, 1e-8);
                const double c = concurrence_closed_form(p, eta);
                EXPECT_NEAR(hs_speed_from_concurrence(j, a, c, std::abs(std::sin(2.0 * eta))) / hs_speed(p, eta), 1.0, 1e-12);
            }
}

TEST(Fidelity, Uhlmann) {
    const DensityMatrix a = evolved_state_closed_form(params(0.3, 0.1), 1.0);
    const DensityMatrix b = evolved_state_closed_form(params(0.3, 0.1), 2.2);
    EXPECT_NEAR(fidelity_uhlmann(a, a), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_uhlmann(a, b), fidelity_uhlmann(b, a), 1e-10);
    const DensityMatrix up = DensityMatrix::pure(basis::ket(basis::kUpUp));
    EXPECT_NEAR(fidelity_uhlmann(up, DensityMatrix::pure(basis::ket(basis::kDownDown))), 0.0, 1e-15);
    // pure vs mixed reduces to <psi|rho|psi>
    const DensityMatrix psi = bell();
    EXPECT_NEAR(fidelity_uhlmann(psi, a), inner(Vec4{0.0, 1.0, 1.0, 0.0}, xxzgeom::apply(a.mat, Vec4{0.0, 1.0, 1.0, 0.0})).real() / 2.0, 1e-10);
}

TEST(Fidelity, Separability) {
    EXPECT_EQ(fidelity_of_separability(0.0), 1.0);
    EXPECT_EQ(fidelity_of_separability(1.0), 0.5);
    EXPECT_NEAR(fidelity_of_separability(0.806475), 0.7956340958, 1e-10);
    EXPECT_THROW(fidelity_of_separability(1.5), PreconditionError);
    EXPECT_THROW(fidelity_of_separability(-0.1), PreconditionError);
}

TEST(SeparableSearch, SeparableStateIsReached) {
    EXPECT_GE(separable_fidelity_search(DensityMatrix::initial(), 2000, 1), 1.0 - 1e-3);
}

TEST(SeparableSearch, BellBound) {
    for (long n : {1L, 10L, 500L, 2000L}) EXPECT_LE(separable_fidelity_search(bell(), n, 3), 0.5 + 1e-6);
}

TEST(SeparableSearch, MonotoneInSamples) {
    const DensityMatrix d = evolved_state_closed_form(params(0.3, 0.1), 1.0);
    double last = 0.0;
    for (long n : {1L, 5L, 50L, 300L, 1000L, 2000L}) {
        const double f = separable_fidelity_search(d, n, 42);
        EXPECT_GE(f, last);
        last = f;
    }
    EXPECT_LE(last, fidelity_of_separability(0.8064744709) + 1e-6);
    EXPECT_THROW(separable_fidelity_search(d, 0, 1), PreconditionError);
}

TEST(SeparableSearch, Deterministic) {
    const DensityMatrix d = evolved_state_closed_form(params(0.3, 0.05), 2.0);
    EXPECT_EQ(separable_fidelity_search(d, 500, 9), separable_fidelity_search(d, 500, 9));
}

TEST(Bures, RawDistance) {
    EXPECT_EQ(bures_distance_raw(1.0), 0.0);
    EXPECT_NEAR(bures_distance_raw(0.0), std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(bures_distance_raw(0.5), 0.7653668647, 1e-10);
}

TEST(Bures, Normalized) {
    EXPECT_NEAR(bures_distance_normalized(0.0), 0.0, 1e-12);
    EXPECT_NEAR(bures_distance_normalized(1.0), 1.0, 1e-12);
    EXPECT_NEAR(bures_distance_normalized(0.5), 0.3410813774, 1e-10);
    // normalization of the raw distance at the separability fidelity
    for (double c : {0.1, 0.5, 0.9})
        EXPECT_NEAR(bures_distance_normalized(c), bures_distance_raw(fidelity_of_separability(c)) / bures_distance_raw(0.5), 1e-12);
    EXPECT_NEAR(bures_distance_from_noise(params(0.3, 0.1), 1.0), bures_distance_normalized(0.8064744709060212), 1e-12);
}

TEST(Bures, Speed) {
    EXPECT_NEAR(bures_speed(0.0), std::numbers::sqrt2 / 4.0, 1e-15);
    EXPECT_EQ(bures_speed(1.0), 0.25);
    EXPECT_NEAR(bures_speed(0.806475), 0.3153636979, 1e-10);
    for (int k = 0; k <= 1000; ++k) {
        const double c = k / 1000.0;
        EXPECT_NEAR(bures_speed(c), std::sqrt(fidelity_of_separability(c) / 8.0), 1e-15);
    }
}

TEST(Bures, Monotonic) {
    for (int k = 1; k <= 1000; ++k) {
        const double c0 = (k - 1) / 1000.0;
        const double c1 = k / 1000.0;
        EXPECT_GT(bures_distance_normalized(c1), bures_distance_normalized(c0));
        EXPECT_LT(bures_speed(c1), bures_speed(c0));
    }
}

TEST(GeometrySample, Consistent) {
    const GeometrySample s = geometry_sample(params(0.3, 0.1), 1.0);
    EXPECT_NEAR(s.concurrence, 0.8064744709, 1e-10);
    EXPECT_NEAR(s.fidelity_sep, fidelity_of_separability(s.concurrence), 1e-15);
    EXPECT_NEAR(s.hs_speed, 4.0 * 0.1 * 0.3 * s.hs_rate, 1e-15);
}
