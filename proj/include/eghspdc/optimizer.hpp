#pragma once

// Pump mode coefficients that maximize the biphoton detection probability
// at one transverse direction. With X = w0 k_+x and Y = w0 k_+y the target
// objective is
//
//   M(c) = | sum_nm c_nm (iX)^n (iY)^m |^2,   sum |c_nm|^2 = 1,
//
// maximized by c_nm = (-i)^(n+m) X^n Y^m / sqrt(1 + sum' X^2n Y^2m) where
// the primed sum runs over the admitted non-(0,0) modes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eghspdc/constants.hpp"
#include "eghspdc/error.hpp"
#include "eghspdc/modes.hpp"
#include "eghspdc/phasematch.hpp"

namespace eghspdc {

struct TargetDirection {
    double X = 0.0;
    double Y = 0.0;

    /// Outside the |X|, |Y| << 1 regime assumed by the objective.
    [[nodiscard]] bool paraxial_warning() const { return std::abs(X) > 0.3 || std::abs(Y) > 0.3; }
};

/// Target for a signal/idler pair. The amplitude carries (-2 pi i w0 nu_+)^n,
/// i.e. (iX)^n with X = -2 pi w0 nu_+x, so this is the direction at which
/// measurement_objective equals the squared mode sum of the amplitude.
inline TargetDirection target_from_pair(const SpatialFrequency& nu_s, const SpatialFrequency& nu_i,
                                        double waist) {
    const SpatialFrequency plus = nu_s + nu_i;
    return {-2.0 * pi * waist * plus.nu_x, -2.0 * pi * waist * plus.nu_y};
}

enum class IndexSet {
    /// Every (n, m) != (0, 0) with n + m <= N.
    AllNonzeroOrders,
    /// n >= 1 and m >= 1 with n + m <= N.
    StrictlyPositivePairs,
};

inline const char* to_string(IndexSet s) {
    return s == IndexSet::AllNonzeroOrders ? "all_nonzero_orders" : "strictly_positive_pairs";
}

/// (0,0) followed by the admitted higher modes.
inline std::vector<ModeIndex> admitted_modes(int max_order, IndexSet set) {
    if (max_order < 0) throw ConfigError("max_order must be nonnegative");
    std::vector<ModeIndex> out{ModeIndex{0, 0}};
    for (ModeIndex idx : modes_up_to(max_order)) {
        if (idx.order() == 0) continue;
        if (set == IndexSet::StrictlyPositivePairs && (idx.n == 0 || idx.m == 0)) continue;
        out.push_back(idx);
    }
    return out;
}

enum class Method { ClosedForm, BruteForce };

inline const char* to_string(Method m) { return m == Method::ClosedForm ? "closed_form" : "brute_force"; }

struct OptimizationResult {
    ModeExpansion expansion;
    double objective = 0.0;
    Method method = Method::ClosedForm;
    int iterations = 0;  ///< brute force: iterations of the winning restart
    int restarts = 0;
    int best_restart = 0;
};

/// (iX)^n (iY)^m.
inline complex target_weight(ModeIndex idx, const TargetDirection& t) {
    return i_pow(idx.order()) * ipow(t.X, idx.n) * ipow(t.Y, idx.m);
}

inline double measurement_objective(const CoefficientMap& coeffs, const TargetDirection& t) {
    complex s{};
    for (const auto& [idx, c] : coeffs) s += c * target_weight(idx, t);
    return std::norm(s);
}

inline double measurement_objective(const ModeExpansion& e, const TargetDirection& t) {
    return measurement_objective(e.coefficients(), t);
}

/// (0,0) followed by an explicit list of admitted higher modes; (0,0) and
/// duplicates in `extra` are ignored.
inline std::vector<ModeIndex> explicit_modes(const std::vector<ModeIndex>& extra) {
    std::vector<ModeIndex> out{ModeIndex{0, 0}};
    for (ModeIndex idx : extra)
        if (idx.order() != 0 && std::find(out.begin(), out.end(), idx) == out.end()) out.push_back(idx);
    return out;
}

inline int max_order_of(const std::vector<ModeIndex>& modes) {
    int n = 0;
    for (ModeIndex idx : modes) n = std::max(n, idx.order());
    return n;
}

/// Closed form over an admitted mode list whose first entry is (0,0).
inline OptimizationResult optimal_expansion(const TargetDirection& t, const std::vector<ModeIndex>& modes) {
    // Direct finite sum; no geometric-series shortcut so |X|, |Y| >= 1 stay exact.
    double sum = 0.0;
    for (size_t k = 1; k < modes.size(); ++k) sum += ipow(t.X * t.X, modes[k].n) * ipow(t.Y * t.Y, modes[k].m);
    const double c00 = 1.0 / std::sqrt(1.0 + sum);
    CoefficientMap coeffs;
    coeffs[modes.front()] = c00;
    for (size_t k = 1; k < modes.size(); ++k)
        coeffs[modes[k]] = minus_i_pow(modes[k].order()) * (ipow(t.X, modes[k].n) * ipow(t.Y, modes[k].m) * c00);
    ModeExpansion e = ModeExpansion::normalized(std::move(coeffs), max_order_of(modes));
    const double obj = measurement_objective(e, t);
    return {std::move(e), obj, Method::ClosedForm, 0, 0, 0};
}

inline OptimizationResult optimal_expansion(const TargetDirection& t, int max_order,
                                            IndexSet set = IndexSet::AllNonzeroOrders) {
    return optimal_expansion(t, admitted_modes(max_order, set));
}

struct BruteForceOptions {
    int restarts = 32;
    double step = 0.5;
    int window = 100;       ///< convergence window, iterations
    double tol = 1e-12;     ///< objective change allowed over the window
    int max_iterations = 100000;
};

/// Projected gradient ascent of M on the unit sphere from random starts.
/// Real and imaginary parts are independent variables; the complex
/// gradient dM/d(re) + i dM/d(im) is 2 s conj(w) with s = sum c w.
/// Deterministic given the seed; ties go to the lowest restart index.
inline OptimizationResult brute_force_optimal(const TargetDirection& t, const std::vector<ModeIndex>& modes,
                                              std::uint64_t seed, const BruteForceOptions& opt = {}) {
    const size_t dim = modes.size();
    std::vector<complex> w(dim);
    for (size_t k = 0; k < dim; ++k) w[k] = target_weight(modes[k], t);

    auto objective = [&](const std::vector<complex>& c) {
        complex s{};
        for (size_t k = 0; k < dim; ++k) s += c[k] * w[k];
        return std::norm(s);
    };
    auto normalize = [](std::vector<complex>& c) {
        double s = 0.0;
        for (const complex& v : c) s += std::norm(v);
        const double inv = 1.0 / std::sqrt(s);
        for (complex& v : c) v *= inv;
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<complex> best;
    double best_obj = -1.0;
    int best_restart = 0, best_iters = 0;
    std::string failures;

    for (int r = 0; r < opt.restarts; ++r) {
        std::vector<complex> c(dim);
        for (complex& v : c) v = {gauss(rng), gauss(rng)};
        normalize(c);
        std::vector<double> history{objective(c)};
        bool converged = false;
        int it = 0;
        while (it < opt.max_iterations) {
            complex s{};
            for (size_t k = 0; k < dim; ++k) s += c[k] * w[k];
            for (size_t k = 0; k < dim; ++k) c[k] += opt.step * 2.0 * s * std::conj(w[k]);
            normalize(c);
            history.push_back(objective(c));
            ++it;
            if (it >= opt.window &&
                std::abs(history[it] - history[it - opt.window]) < opt.tol) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            failures += " restart " + std::to_string(r) + " objective " + std::to_string(history.back());
            continue;
        }
        if (history.back() > best_obj) {
            best_obj = history.back();
            best = c;
            best_restart = r;
            best_iters = it;
        }
    }
    if (best.empty())
        throw ConvergenceError("brute-force optimizer did not converge within " +
                               std::to_string(opt.max_iterations) + " iterations:" + failures);

    // Global phase: c_00 real and positive.
    if (std::abs(best[0]) > 0.0) {
        const complex rot = std::conj(best[0]) / std::abs(best[0]);
        for (complex& v : best) v *= rot;
        best[0] = std::abs(best[0]);
    }
    CoefficientMap coeffs;
    for (size_t k = 0; k < dim; ++k) coeffs[modes[k]] = best[k];
    ModeExpansion e = ModeExpansion::normalized(std::move(coeffs), max_order_of(modes));
    const double obj = measurement_objective(e, t);
    return {std::move(e), obj, Method::BruteForce, best_iters, opt.restarts, best_restart};
}

inline OptimizationResult brute_force_optimal(const TargetDirection& t, int max_order, IndexSet set,
                                              std::uint64_t seed, const BruteForceOptions& opt = {}) {
    return brute_force_optimal(t, admitted_modes(max_order, set), seed, opt);
}

}  // namespace eghspdc
