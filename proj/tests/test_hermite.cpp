#include <gtest/gtest.h>

#include <complex>

#include "eghspdc/constants.hpp"
#include "eghspdc/hermite.hpp"

using eghspdc::complex;
using eghspdc::hermite;

TEST(Hermite, OrderZeroIsOne) {
    EXPECT_EQ(hermite(0, complex{3.7, -1.2}), complex{1.0});
    EXPECT_EQ(hermite(0, -5.0), 1.0);
}

TEST(Hermite, OrderOneIsTwoW) { EXPECT_EQ(hermite(1, complex{2.0, 1.0}), (complex{4.0, 2.0})); }

TEST(Hermite, OrderTwoAtOne) { EXPECT_DOUBLE_EQ(hermite(2, 1.0), 2.0); }

// Reference values from mpmath.hermite at 40 digits.
TEST(Hermite, ComplexArgumentReferenceValues) {
    const complex h5 = hermite(5, complex{0.3, 0.2});
    EXPECT_NEAR(h5.real(), 37.24896, 1e-12);
    EXPECT_NEAR(h5.imag(), 16.67904, 1e-12);
    const complex h7 = hermite(7, complex{-1.1, 0.4});
    EXPECT_NEAR(h7.real(), -1063.9021184, 1e-9);
    EXPECT_NEAR(h7.imag(), 1331.4466304, 1e-9);
    EXPECT_DOUBLE_EQ(hermite(10, 0.5), 22591.0);
}

TEST(Hermite, ParityProperty) {
    const complex w{0.7, -0.45};
    for (int n = 0; n <= 12; ++n) {
        const complex a = hermite(n, w), b = hermite(n, -w);
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        EXPECT_NEAR(std::abs(a - sign * b), 0.0, 1e-12 * std::abs(a)) << "n=" << n;
    }
}

// H_n'(w) = 2 n H_{n-1}(w), checked with a complex-step-free central difference.
TEST(Hermite, DerivativeIdentity) {
    const complex w{0.4, 0.3};
    const double h = 1e-6;
    for (int n = 1; n <= 8; ++n) {
        const complex d = (hermite(n, w + h) - hermite(n, w - h)) / (2.0 * h);
        EXPECT_NEAR(std::abs(d - 2.0 * n * hermite(n - 1, w)), 0.0, 1e-6 * std::abs(d) + 1e-8) << "n=" << n;
    }
}

TEST(Hermite, ConjugateSymmetry) {
    const complex w{-0.9, 1.3};
    for (int n = 0; n <= 9; ++n) EXPECT_EQ(hermite(n, std::conj(w)), std::conj(hermite(n, w)));
}

TEST(Powers, MinusIPowerTable) {
    EXPECT_EQ(eghspdc::minus_i_pow(0), complex(1, 0));
    EXPECT_EQ(eghspdc::minus_i_pow(1), complex(0, -1));
    EXPECT_EQ(eghspdc::minus_i_pow(2), complex(-1, 0));
    EXPECT_EQ(eghspdc::minus_i_pow(3), complex(0, 1));
    EXPECT_EQ(eghspdc::minus_i_pow(6), complex(-1, 0));
    EXPECT_EQ(eghspdc::i_pow(3), complex(0, -1));
    EXPECT_DOUBLE_EQ(eghspdc::ipow(0.5, 3), 0.125);
    EXPECT_DOUBLE_EQ(eghspdc::ipow(7.0, 0), 1.0);
}
