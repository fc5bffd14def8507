#include <gtest/gtest.h>

#include <numbers>

#include "xxzgeom/entanglement.hpp"

using namespace xxzgeom;

namespace {
DensityMatrix bell() { return DensityMatrix::pure(Vec4{0.0, 1.0, 1.0, 0.0}); }
}  // namespace

TEST(SpinFlip, MaximallyMixed) {
    const DensityMatrix m{0.25 * CMat4::identity()};
    EXPECT_LE(max_abs_diff(spin_flip(m), (1.0 / 16.0) * CMat4::identity()), 1e-16);
}

TEST(SpinFlip, BellIsFixed) {
    EXPECT_LE(max_abs_diff(spin_flip(bell()), bell().mat), 1e-15);
}

TEST(SpinFlip, ProductStateVanishes) {
    EXPECT_LE(max_abs_entry(spin_flip(DensityMatrix::initial())), 0.0);
}

TEST(Concurrence, Examples) {
    EXPECT_NEAR(concurrence_wootters(bell()).value, 1.0, 1e-14);
    EXPECT_EQ(concurrence_wootters(DensityMatrix::initial()).value, 0.0);
    EXPECT_EQ(concurrence_wootters(DensityMatrix{0.25 * CMat4::identity()}).value, 0.0);

    ModelParams p;
    p.noise_alpha = 0.1;
    const DensityMatrix d = evolved_state_closed_form(p, 1.0);
    EXPECT_NEAR(concurrence_wootters(d).value, 0.8064744709, 1e-10);
    EXPECT_NEAR(concurrence_closed_form(p, 1.0), 0.8064744709, 1e-10);
    EXPECT_NEAR(concurrence_closed_form(p, std::numbers::pi / 4.0), 0.9100572407, 1e-10);
    EXPECT_NEAR(concurrence_closed_form(p, std::numbers::pi / 2.0), 0.0, 1e-15);

    ModelParams clean;
    EXPECT_NEAR(concurrence_closed_form(clean, std::numbers::pi / 4.0), 1.0, 1e-15);
}

TEST(Concurrence, LambdasDescendingAndWithinUnit) {
    ModelParams p;
    p.noise_alpha = 0.05;
    for (double eta = 0.0; eta < 6.3; eta += 0.37) {
        const ConcurrenceBreakdown b = concurrence_wootters(evolved_state_closed_form(p, eta));
        for (std::size_t k = 1; k < 4; ++k) EXPECT_GE(b.lambdas[k - 1], b.lambdas[k]);
        EXPECT_GE(b.value, 0.0);
        EXPECT_LE(b.value, 1.0);
        EXPECT_NEAR(b.value, concurrence_closed_form(p, eta), 1e-10);
    }
}

TEST(Concurrence, WernerStates) {
    // Werner state p |Bell><Bell| + (1-p) I/4 has C = max(0, (3p-1)/2).
    for (double w : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
        const DensityMatrix d{w * bell().mat + (1.0 - w) * 0.25 * CMat4::identity()};
        EXPECT_NEAR(concurrence_wootters(d).value, std::max(0.0, 1.5 * w - 0.5), 1e-12);
    }
}
