#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eghspdc/modes.hpp"
#include "eghspdc/oracles.hpp"

using namespace eghspdc;

namespace {

const PumpGeometry geom(0.8e-6, 2.0e-6);

double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Geometry, RayleighRangeIsDerived) {
    EXPECT_DOUBLE_EQ(geom.rayleigh_range(), pi * 4e-12 / 0.8e-6);
    EXPECT_DOUBLE_EQ(geom.area(), pi * 4e-12);
    EXPECT_EQ(geom.u0(), complex{1.0});
}

TEST(Geometry, RejectsDegenerateInput) {
    EXPECT_THROW(PumpGeometry(0.0, 1e-6), ConfigError);
    EXPECT_THROW(PumpGeometry(-1e-6, 1e-6), ConfigError);
    EXPECT_THROW(PumpGeometry(1e-6, 0.0), ConfigError);
    EXPECT_THROW(PumpGeometry(1e-6, std::nan("")), ConfigError);
}

TEST(Xi, Examples) {
    const double zr = geom.rayleigh_range();
    EXPECT_EQ(xi(0.0, geom), (complex{1.0, 0.0}));
    EXPECT_EQ(xi(zr, geom), (complex{1.0, 1.0}));
    EXPECT_EQ(xi(-2.0 * zr, geom), (complex{1.0, -2.0}));
}

TEST(ModeIndex, RejectsNegative) {
    EXPECT_THROW(ModeIndex(-1, 0), ConfigError);
    EXPECT_THROW(ModeIndex(0, -2), ConfigError);
    EXPECT_EQ(ModeIndex(2, 3).order(), 5);
}

TEST(ModeIndex, EnumerationOrder) {
    const auto modes = modes_up_to(2);
    ASSERT_EQ(modes.size(), 6u);
    EXPECT_EQ(modes[0], ModeIndex(0, 0));
    EXPECT_EQ(modes[1], ModeIndex(1, 0));
    EXPECT_EQ(modes[2], ModeIndex(0, 1));
    EXPECT_EQ(modes[3], ModeIndex(2, 0));
    EXPECT_EQ(modes[5], ModeIndex(0, 2));
    EXPECT_EQ(modes_up_to(4).size(), 15u);
}

TEST(ModeExpansion, EnforcesUnitNorm) {
    EXPECT_NO_THROW(ModeExpansion({{{0, 0}, 1.0}}, 0));
    EXPECT_THROW(ModeExpansion({{{0, 0}, 0.9}}, 0), ConfigError);
    EXPECT_NO_THROW(ModeExpansion({{{0, 0}, std::sqrt(0.5)}, {{1, 1}, complex(0, -std::sqrt(0.5))}}, 2));
}

TEST(ModeExpansion, EnforcesMaxOrder) {
    EXPECT_THROW(ModeExpansion({{{2, 1}, 1.0}}, 2), ConfigError);
    EXPECT_THROW(ModeExpansion({{{0, 0}, 1.0}}, -1), ConfigError);
}

TEST(ModeExpansion, NormalizedRescales) {
    const ModeExpansion e = ModeExpansion::normalized({{{0, 0}, 3.0}, {{1, 0}, complex(0, 4.0)}}, 1);
    EXPECT_DOUBLE_EQ(e.coefficient({0, 0}).real(), 0.6);
    EXPECT_DOUBLE_EQ(e.coefficient({1, 0}).imag(), 0.8);
    EXPECT_EQ(e.coefficient({0, 1}), complex{});
    EXPECT_THROW(ModeExpansion::normalized({{{0, 0}, 0.0}}, 0), ConfigError);
}

TEST(EghEval, FundamentalAtOriginIsU0) {
    EXPECT_EQ(egh_eval({0, 0}, geom, {0, 0, 0}), complex{1.0});
    const PumpGeometry scaled(0.8e-6, 2e-6, complex{2.5, -1.0});
    EXPECT_EQ(egh_eval({0, 0}, scaled, {0, 0, 0}), (complex{2.5, -1.0}));
}

TEST(EghEval, OddModeVanishesOnAxis) {
    for (double y : {-1e-6, 0.0, 3e-6})
        for (double z : {-5e-6, 0.0, 2e-5}) EXPECT_EQ(std::abs(egh_eval({1, 0}, geom, {0.0, y, z})), 0.0);
}

// Reference values from the derivative definition u0 (-w0)^(n+m) / xi
// d^n/dx^n d^m/dy^m exp(-pi rho^2 / (lambda z_r xi)), differentiated by
// mpmath at 40 digits.
TEST(EghEval, DerivativeDefinitionReferenceValues) {
    const double w0 = geom.waist(), zr = geom.rayleigh_range();
    EXPECT_LT(rel(egh_eval({2, 1}, geom, {0.3 * w0, -0.2 * w0, 0.5 * zr}),
                  {0.13762265033069407, -0.42125169188581457}),
              1e-13);
    EXPECT_LT(rel(egh_eval({3, 2}, geom, {-0.7 * w0, 0.4 * w0, -1.3 * zr}),
                  {1.440195770611379, -0.21304977632875213}),
              1e-13);
    EXPECT_LT(rel(egh_eval({0, 4}, geom, {0.1 * w0, 1.1 * w0, 2.0 * zr}),
                  {0.576180977926284, -1.2494809051955809}),
              1e-13);
}

TEST(EghEval, MatchesFiniteDifferenceOfKernel) {
    const double w0 = geom.waist(), zr = geom.rayleigh_range();
    const TransversePoint p{0.3 * w0, -0.2 * w0, 0.5 * zr};
    const complex fd = geom.u0() * std::pow(-w0, 3) / xi(p.z, geom) *
                       oracle::kernel_derivative_fd({2, 1}, geom, p, 0.02 * w0);
    EXPECT_LT(rel(egh_eval({2, 1}, geom, p), fd), 1e-7);
}

TEST(EghEval, RodriguesEquivalenceRandomPoints) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 20; ++k) {
        const TransversePoint p{u(rng) * geom.waist(), u(rng) * geom.waist(), u(rng) * geom.rayleigh_range()};
        for (ModeIndex idx : modes_up_to(4))
            EXPECT_LT(rel(egh_eval(idx, geom, p), oracle::mode_from_derivative(idx, geom, p)), 1e-6)
                << to_string(idx);
    }
}

TEST(PsiEval, Examples) {
    EXPECT_EQ(psi_eval({0, 0}, geom, {1e-6, -2e-6, 3e-6}), complex{1.0});
    EXPECT_EQ(std::abs(psi_eval({1, 1}, geom, {0.0, 0.0, 4e-6})), 0.0);
    EXPECT_NEAR(std::abs(psi_eval({2, 0}, geom, {geom.waist(), 0.0, 0.0}) - 2.0), 0.0, 1e-13);
}

TEST(AdjointEval, EqualsPsiAtWaist) {
    for (ModeIndex idx : modes_up_to(3)) {
        const TransversePoint p{0.4e-6, -1.1e-6, 0.0};
        EXPECT_LT(std::abs(adjoint_eval(idx, geom, p) - psi_eval(idx, geom, p)), 1e-13);
    }
}

TEST(Overlap, ParityKillsCrossTerm) {
    const complex f00 = overlap_norm({0, 0}, geom);
    EXPECT_LE(std::abs(biorthogonal_overlap({1, 0}, {0, 1}, geom, 0.0)), 1e-8 * std::abs(f00));
}

TEST(Overlap, FundamentalIsGaussianIntegral) {
    const complex f = biorthogonal_overlap({0, 0}, {0, 0}, geom, 0.0);
    const double expected = geom.wavelength() * geom.rayleigh_range();
    EXPECT_LT(std::abs(f - expected) / expected, 1e-12);
}

TEST(Overlap, DiagonalIsZIndependent) {
    const complex a = biorthogonal_overlap({1, 1}, {1, 1}, geom, 0.0);
    const complex b = biorthogonal_overlap({1, 1}, {1, 1}, geom, 0.7 * geom.rayleigh_range());
    EXPECT_LT(rel(b, a), 1e-6);
    EXPECT_LT(rel(a, overlap_norm({1, 1}, geom)), 1e-10);
}

TEST(Overlap, OffDiagonalVanishesAwayFromWaist) {
    const double f00 = std::abs(overlap_norm({0, 0}, geom));
    for (double zr : {0.5, 2.0})
        for (ModeIndex a : modes_up_to(3))
            for (ModeIndex b : modes_up_to(3))
                if (a != b) {
                    EXPECT_LE(std::abs(biorthogonal_overlap(a, b, geom, zr * geom.rayleigh_range())), 1e-8 * f00)
                        << to_string(a) << "x" << to_string(b);
                }
}

TEST(Overlap, NonConvergenceIsReported) {
    QuadratureOptions opt;
    opt.rel_tol = 0.0;
    opt.max_intervals = 128;
    EXPECT_THROW(biorthogonal_overlap({2, 1}, {2, 1}, geom, 0.3 * geom.rayleigh_range(), opt), QuadratureError);
}

namespace {

SampledField sampled(const CoefficientMap& c, double extent = 16.0 * geom.waist(), int n = 160) {
    return sample_field([&](TransversePoint p) { return synthesize(c, geom, p); }, extent, n);
}

}  // namespace

TEST(SampleField, GridContainsAxis) {
    const SampledField f = sampled({{{0, 0}, 1.0}}, 4.0 * geom.waist(), 8);
    EXPECT_EQ(f.nx, 8);
    EXPECT_DOUBLE_EQ(f.x(4), 0.0);
    EXPECT_DOUBLE_EQ(f.y(4), 0.0);
    EXPECT_EQ(f.at(4, 4), complex{1.0});
}

TEST(Decompose, FundamentalRoundTrip) {
    const Decomposition d = decompose(sampled({{{0, 0}, 1.0}}), geom, 3);
    EXPECT_NEAR(std::abs(d.expansion.coefficient({0, 0}) - 1.0), 0.0, 1e-8);
    for (ModeIndex idx : modes_up_to(3))
        if (idx.order() > 0) {
            EXPECT_LT(std::abs(d.expansion.coefficient(idx)), 1e-8);
        }
    EXPECT_NEAR(d.captured_power, 1.0, 1e-8);
}

TEST(Decompose, TwoModeRoundTrip) {
    const double r = 1.0 / std::sqrt(2.0);
    const Decomposition d = decompose(sampled({{{0, 0}, r}, {{1, 1}, r}}), geom, 2);
    EXPECT_NEAR(std::abs(d.expansion.coefficient({0, 0}) - r), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(d.expansion.coefficient({1, 1}) - r), 0.0, 1e-8);
}

TEST(Decompose, RandomExpansionsRoundTrip) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 3; ++t) {
        const CoefficientMap c = oracle::random_unit_coefficients(modes_up_to(3), rng);
        const Decomposition d = decompose(sampled(c), geom, 3);
        for (const auto& [idx, v] : c) EXPECT_LT(std::abs(d.expansion.coefficient(idx) - v), 1e-8);
    }
}

TEST(Decompose, ZeroFieldHasNoPower) {
    EXPECT_THROW(decompose(sampled({{{0, 0}, 0.0}}), geom, 2), InsufficientPowerError);
}

TEST(Decompose, RejectsSmallDomain) {
    EXPECT_THROW(decompose(sampled({{{0, 0}, 1.0}}, 8.0 * geom.waist(), 80), geom, 1), DomainError);
}

TEST(Decompose, RejectsBoundaryLeakage) {
    const PumpGeometry wide(0.8e-6, 6.0e-6);
    // A beam three times as wide as the grid assumes does not decay inside +-8 of the narrow waist.
    const SampledField f = sample_field([&](TransversePoint p) { return egh_eval({0, 0}, wide, p); },
                                        16.0 * geom.waist(), 160);
    EXPECT_THROW(decompose(f, geom, 1), DomainError);
}

TEST(Decompose, RejectsOffWaistField) {
    SampledField f = sampled({{{0, 0}, 1.0}});
    f.z = 1e-6;
    EXPECT_THROW(decompose(f, geom, 1), ConfigError);
}

TEST(Paraxial, FundamentalAndFirstOrder) {
    const ResidualGrid grid = ResidualGrid::reference(geom);
    EXPECT_LE(paraxial_residual({0, 0}, geom, grid), 1e-3);
    EXPECT_LE(paraxial_residual({1, 0}, geom, grid), 1e-3);
}

TEST(Paraxial, AllModesUpToOrderThree) {
    const ResidualGrid grid = ResidualGrid::reference(geom);
    for (ModeIndex idx : modes_up_to(3)) EXPECT_LE(paraxial_residual(idx, geom, grid), 1e-3) << to_string(idx);
}

TEST(Paraxial, PlaneWaveFails) {
    const double k = geom.wavenumber();
    const double r = paraxial_residual([k](TransversePoint p) { return std::exp(imag_unit * k * p.z); }, geom,
                                       ResidualGrid::reference(geom));
    EXPECT_GT(r, 0.5);
}

// The mode mirrored in z propagates the wrong way and must fail.
TEST(Paraxial, BackwardPropagatingModeFails) {
    const double r = paraxial_residual([](TransversePoint p) { return egh_eval({1, 1}, geom, {p.x, p.y, -p.z}); },
                                       geom, ResidualGrid::reference(geom));
    EXPECT_GT(r, 1e-2);
}
