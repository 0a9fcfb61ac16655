#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eghspdc/optimizer.hpp"
#include "eghspdc/oracles.hpp"
#include "eghspdc/validation.hpp"

using namespace eghspdc;

TEST(Objective, PureFundamentalIsOne) {
    for (TargetDirection t : {TargetDirection{0, 0}, TargetDirection{0.2, -0.1}, TargetDirection{3, 4}})
        EXPECT_DOUBLE_EQ(measurement_objective(ModeExpansion::pure({0, 0}), t), 1.0);
}

TEST(Objective, MonomialKillsMode) {
    EXPECT_EQ(measurement_objective(ModeExpansion::pure({1, 0}), {0.0, 0.25}), 0.0);
}

TEST(Objective, TwoTermArithmetic) {
    const double r = 1.0 / std::sqrt(2.0);
    const ModeExpansion e({{{0, 0}, r}, {{1, 0}, complex(0, -r)}}, 1);
    EXPECT_NEAR(measurement_objective(e, {0.1, 0.0}), 0.605, 1e-15);
}

TEST(ClosedForm, CollinearIsFundamental) {
    for (IndexSet set : {IndexSet::AllNonzeroOrders, IndexSet::StrictlyPositivePairs})
        for (int n = 0; n <= 4; ++n) {
            const OptimizationResult r = optimal_expansion({0.0, 0.0}, n, set);
            for (const auto& [idx, c] : r.expansion.coefficients())
                EXPECT_EQ(c, idx.order() == 0 ? complex{1.0} : complex{}) << to_string(idx);
            EXPECT_EQ(r.objective, 1.0);
        }
}

TEST(ClosedForm, SingleCrossMode) {
    const OptimizationResult r = optimal_expansion({0.1, 0.1}, explicit_modes({{1, 1}}));
    EXPECT_NEAR(std::abs(r.expansion.coefficient({1, 1})), 0.01 / std::sqrt(1.0001), 1e-15);
    EXPECT_NEAR(std::abs(r.expansion.coefficient({1, 1})), 0.00999950, 5e-9);
    EXPECT_NEAR(r.expansion.coefficient({0, 0}).real(), 1.0 / std::sqrt(1.0001), 1e-15);
    EXPECT_NEAR(r.expansion.coefficient({0, 0}).real(), 0.99995, 1e-8);
    EXPECT_EQ(r.expansion.coefficients().size(), 2u);
}

TEST(ClosedForm, XOnlyTarget) {
    const OptimizationResult r = optimal_expansion({0.2, 0.0}, 2);
    const complex c00 = r.expansion.coefficient({0, 0});
    for (const auto& [idx, c] : r.expansion.coefficients()) {
        if (idx.m > 0) {
            EXPECT_EQ(c, complex{}) << to_string(idx);
        } else {
            EXPECT_LT(std::abs(c / c00 - ipow(complex(0, -0.2), idx.n)), 1e-15) << to_string(idx);
        }
    }
}

TEST(ClosedForm, IndexSets) {
    EXPECT_EQ(admitted_modes(2, IndexSet::AllNonzeroOrders).size(), 6u);
    const auto pos = admitted_modes(3, IndexSet::StrictlyPositivePairs);
    ASSERT_EQ(pos.size(), 4u);
    EXPECT_EQ(pos[0], ModeIndex(0, 0));
    EXPECT_EQ(pos[1], ModeIndex(1, 1));
    EXPECT_THROW(admitted_modes(-1, IndexSet::AllNonzeroOrders), ConfigError);
    EXPECT_EQ(explicit_modes({{0, 0}, {1, 1}, {1, 1}}).size(), 2u);
}

TEST(ClosedForm, LargeTargetUsesFiniteSum) {
    const TargetDirection t{2.0, 1.5};
    EXPECT_TRUE(t.paraxial_warning());
    const OptimizationResult r = optimal_expansion(t, 3);
    EXPECT_NEAR(norm_squared(r.expansion.coefficients()), 1.0, 1e-12);
    double s = 1.0;
    for (ModeIndex idx : modes_up_to(3))
        if (idx.order() > 0) s += std::pow(4.0, idx.n) * std::pow(2.25, idx.m);
    EXPECT_NEAR(r.objective, s, 1e-10 * s);
}

TEST(ClosedForm, ParaxialWarningThreshold) {
    EXPECT_FALSE((TargetDirection{0.3, -0.3}.paraxial_warning()));
    EXPECT_TRUE((TargetDirection{0.31, 0.0}.paraxial_warning()));
}

TEST(ClosedForm, Normalization) { EXPECT_TRUE(validation::check_optimizer_normalization(1).passed); }

TEST(ClosedForm, PhaseLaw) { EXPECT_TRUE(validation::check_optimizer_phase_law(2).passed); }

TEST(ClosedForm, DominatesRandomExpansions) {
    std::mt19937_64 rng(4);
    const TargetDirection t{0.3, 0.2};
    const auto modes = admitted_modes(2, IndexSet::AllNonzeroOrders);
    const double best = optimal_expansion(t, 2).objective;
    for (int k = 0; k < 1000; ++k)
        EXPECT_LE(measurement_objective(oracle::random_unit_coefficients(modes, rng), t), best);
}

TEST(ClosedForm, DominanceAcrossTargets) { EXPECT_TRUE(validation::check_optimizer_dominance(5, 300).passed); }

TEST(BruteForce, CollinearForcedMaximum) {
    const OptimizationResult r = brute_force_optimal({0.0, 0.0}, 2, IndexSet::AllNonzeroOrders, 1);
    EXPECT_NEAR(std::abs(r.expansion.coefficient({0, 0})), 1.0, 1e-6);
    EXPECT_NEAR(r.objective, 1.0, 1e-12);
    EXPECT_EQ(r.method, Method::BruteForce);
    EXPECT_EQ(r.restarts, 32);
}

TEST(BruteForce, SingleCrossModeMatchesClosedForm) {
    const auto modes = explicit_modes({{1, 1}});
    const OptimizationResult cf = optimal_expansion({0.1, 0.1}, modes);
    const OptimizationResult bf = brute_force_optimal({0.1, 0.1}, modes, 42);
    for (ModeIndex idx : modes) {
        EXPECT_NEAR(std::abs(bf.expansion.coefficient(idx)), std::abs(cf.expansion.coefficient(idx)), 1e-6);
    }
    const double phase_cf = std::arg(cf.expansion.coefficient({1, 1}) / cf.expansion.coefficient({0, 0}));
    const double phase_bf = std::arg(bf.expansion.coefficient({1, 1}) / bf.expansion.coefficient({0, 0}));
    EXPECT_NEAR(std::remainder(phase_cf - phase_bf, 2 * pi), 0.0, 1e-6);
}

TEST(BruteForce, GlobalPhaseFixed) {
    const OptimizationResult r = brute_force_optimal({0.25, -0.1}, 2, IndexSet::AllNonzeroOrders, 9);
    EXPECT_GT(r.expansion.coefficient({0, 0}).real(), 0.0);
    EXPECT_EQ(r.expansion.coefficient({0, 0}).imag(), 0.0);
}

TEST(BruteForce, AgreesWithClosedForm) { EXPECT_TRUE(validation::check_optimizer_oracle(3).passed); }

TEST(BruteForce, DeterministicGivenSeed) {
    const auto a = brute_force_optimal({0.2, 0.1}, 2, IndexSet::AllNonzeroOrders, 77);
    const auto b = brute_force_optimal({0.2, 0.1}, 2, IndexSet::AllNonzeroOrders, 77);
    EXPECT_EQ(a.expansion.coefficients(), b.expansion.coefficients());
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(BruteForce, NonConvergenceReportsRestarts) {
    BruteForceOptions opt;
    opt.max_iterations = 50;
    opt.restarts = 3;
    try {
        brute_force_optimal({0.2, 0.1}, 2, IndexSet::AllNonzeroOrders, 1, opt);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("restart 0"), std::string::npos);
        EXPECT_NE(msg.find("restart 2"), std::string::npos);
    }
}

TEST(Consistency, JsaModulusSharesArgmax) {
    EXPECT_TRUE(validation::check_optimizer_jsa_consistency(validation::reference_setup(), 6).passed);
}

TEST(Consistency, TargetFromPair) {
    const double w0 = 20e-6;
    const TargetDirection t = target_from_pair({1e3, -2e3, 1.0}, {500.0, 0.0, 1.0}, w0);
    EXPECT_DOUBLE_EQ(t.X, -2.0 * pi * w0 * 1.5e3);
    EXPECT_DOUBLE_EQ(t.Y, 2.0 * pi * w0 * 2e3);
}

TEST(Consistency, LimitIndependence) {
    EXPECT_TRUE(validation::check_optimizer_limit_independence(validation::reference_setup(), 12).passed);
}
