#pragma once

// Elegant (complex-argument) Gauss-Hermite modes of a circular pump beam,
// their biorthogonal partners, and projection of sampled fields onto them.
//
// Mode definition (z measured from the waist, xi = 1 + i z / z_r):
//
//   u_nm = u0 (-w0)^(n+m) / xi  d^n/dx^n d^m/dy^m exp(-pi rho^2 / (lambda z_r xi))
//
// Applying d^n/dx^n exp(-x^2/s^2) = (-1/s)^n H_n(x/s) exp(-x^2/s^2) with
// s = w0 sqrt(xi) gives the closed form evaluated here:
//
//   u_nm = u0 xi^(-1-(n+m)/2) H_n(x/s) H_m(y/s) exp(-rho^2 / s^2)

#include <algorithm>
#include <cmath>
#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "eghspdc/constants.hpp"
#include "eghspdc/error.hpp"
#include "eghspdc/geometry.hpp"
#include "eghspdc/hermite.hpp"

namespace eghspdc {

struct ModeIndex {
    int n = 0;  ///< x order
    int m = 0;  ///< y order

    constexpr ModeIndex() = default;
    ModeIndex(int n_, int m_) : n(n_), m(m_) {
        if (n < 0 || m < 0)
            throw ConfigError("mode index must be nonnegative, got (" + std::to_string(n) + "," +
                              std::to_string(m) + ")");
    }

    [[nodiscard]] constexpr int order() const { return n + m; }
    friend constexpr auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

inline std::string to_string(const ModeIndex& idx) {
    return "(" + std::to_string(idx.n) + "," + std::to_string(idx.m) + ")";
}

/// All indices with n + m <= max_order, ordered by total order then n descending.
inline std::vector<ModeIndex> modes_up_to(int max_order) {
    std::vector<ModeIndex> out;
    for (int order = 0; order <= max_order; ++order)
        for (int n = order; n >= 0; --n) out.emplace_back(n, order - n);
    return out;
}

using CoefficientMap = std::map<ModeIndex, complex>;

/// Squared l2 norm of a coefficient set.
inline double norm_squared(const CoefficientMap& coeffs) {
    double s = 0.0;
    for (const auto& [idx, c] : coeffs) s += std::norm(c);
    return s;
}

/// Unit-norm set of EGH coefficients with every order bounded by max_order.
class ModeExpansion {
public:
    static constexpr double norm_tolerance = 1e-12;

    ModeExpansion(CoefficientMap coeffs, int max_order)
        : coeffs_(std::move(coeffs)), max_order_(max_order) {
        if (max_order_ < 0) throw ConfigError("max_order must be nonnegative");
        for (const auto& [idx, c] : coeffs_) {
            if (idx.order() > max_order_)
                throw ConfigError("mode " + to_string(idx) + " exceeds max_order " +
                                  std::to_string(max_order_));
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw ConfigError("mode " + to_string(idx) + " has a non-finite coefficient");
        }
        const double s = norm_squared(coeffs_);
        if (std::abs(s - 1.0) > norm_tolerance)
            throw ConfigError("mode coefficients must have unit norm, sum |c|^2 = " +
                              std::to_string(s));
    }

    /// Rescales `coeffs` to unit norm.
    static ModeExpansion normalized(CoefficientMap coeffs, int max_order) {
        const double s = norm_squared(coeffs);
        if (!(s > 0.0)) throw ConfigError("cannot normalize an all-zero coefficient set");
        const double scale = 1.0 / std::sqrt(s);
        for (auto& [idx, c] : coeffs) c *= scale;
        return ModeExpansion(std::move(coeffs), max_order);
    }

    static ModeExpansion pure(ModeIndex idx, int max_order = -1) {
        return ModeExpansion({{idx, complex{1.0, 0.0}}}, std::max(max_order, idx.order()));
    }

    [[nodiscard]] const CoefficientMap& coefficients() const { return coeffs_; }
    [[nodiscard]] int max_order() const { return max_order_; }

    [[nodiscard]] complex coefficient(ModeIndex idx) const {
        auto it = coeffs_.find(idx);
        return it == coeffs_.end() ? complex{} : it->second;
    }

private:
    CoefficientMap coeffs_;
    int max_order_;
};

namespace detail {

// One transverse axis of u_nm: xi^(-1/2-k/2) H_k(t/s) exp(-t^2/s^2) with
// s = w sqrt(xi). The waist is passed per axis; the circular beam uses
// the same value twice.
inline complex egh_axis(int order, double t, double axis_waist, complex xi_z) {
    const complex root = std::sqrt(xi_z);
    const complex s = axis_waist * root;
    return hermite(order, t / s) * std::exp(-t * t / (s * s)) / (root * ipow(root, order));
}

}  // namespace detail

/// Closed-form elegant Gauss-Hermite mode u_nm at point p.
inline complex egh_eval(ModeIndex idx, const PumpGeometry& geom, TransversePoint p) {
    const complex xz = xi(p.z, geom);
    return geom.u0() * detail::egh_axis(idx.n, p.x, geom.waist(), xz) *
           detail::egh_axis(idx.m, p.y, geom.waist(), xz);
}

/// Biorthogonal partner psi_nm = H_n(sqrt(pi/(lambda z_r xi*)) x) H_m(... y).
inline complex psi_eval(ModeIndex idx, const PumpGeometry& geom, TransversePoint p) {
    const complex scale =
        std::sqrt(pi / (geom.wavelength() * geom.rayleigh_range() * std::conj(xi(p.z, geom))));
    return hermite(idx.n, scale * p.x) * hermite(idx.m, scale * p.y);
}

/// Partner used by the overlap integral at arbitrary z:
///   phi_nm = xi^((n+m)/2) conj(psi_nm) = xi^((n+m)/2) H_n(x/s) H_m(y/s).
/// It solves the adjoint paraxial equation, so the unconjugated overlap
/// with u_nm is independent of z. At z = 0 it coincides with psi_nm.
inline complex adjoint_eval(ModeIndex idx, const PumpGeometry& geom, TransversePoint p) {
    const complex root = std::sqrt(xi(p.z, geom));
    return ipow(root, idx.order()) * std::conj(psi_eval(idx, geom, p));
}

/// Diagonal overlap f_nm = u0 pi w0^2 2^(n+m) n! m!.
inline complex overlap_norm(ModeIndex idx, const PumpGeometry& geom) {
    double fact = 1.0;
    for (int k = 2; k <= idx.n; ++k) fact *= k;
    for (int k = 2; k <= idx.m; ++k) fact *= k;
    return geom.u0() * geom.area() * std::ldexp(fact, idx.order());
}

struct QuadratureOptions {
    double rel_tol = 1e-10;
    int initial_intervals = 64;
    int max_intervals = 2048;
    /// Half-width of the square domain in units of the beam radius w0 |xi|.
    double half_width_beam_radii = 10.0;
};

/// Overlap of u_a with the partner of b on the plane z, by a refined
/// tensor-product trapezoid rule. Approximately delta_ab f_a for any z.
inline complex biorthogonal_overlap(ModeIndex a, ModeIndex b, const PumpGeometry& geom, double z,
                                    const QuadratureOptions& opt = {}) {
    const double half = opt.half_width_beam_radii * geom.waist() * std::abs(xi(z, geom));
    auto integrate = [&](int intervals, double& abs_sum) {
        const double h = 2.0 * half / intervals;
        complex sum{};
        abs_sum = 0.0;
        for (int iy = 0; iy <= intervals; ++iy) {
            const double wy = (iy == 0 || iy == intervals) ? 0.5 : 1.0;
            const double y = -half + iy * h;
            for (int ix = 0; ix <= intervals; ++ix) {
                const double wx = (ix == 0 || ix == intervals) ? 0.5 : 1.0;
                const TransversePoint p{-half + ix * h, y, z};
                const complex v = egh_eval(a, geom, p) * adjoint_eval(b, geom, p);
                sum += wx * wy * v;
                abs_sum += wx * wy * std::abs(v);
            }
        }
        abs_sum *= h * h;
        return sum * (h * h);
    };

    double scale = 0.0;
    int intervals = opt.initial_intervals;
    complex previous = integrate(intervals, scale);
    while (intervals < opt.max_intervals) {
        intervals *= 2;
        const complex current = integrate(intervals, scale);
        if (std::abs(current - previous) <= opt.rel_tol * std::max(std::abs(current), scale))
            return current;
        previous = current;
    }
    throw QuadratureError("overlap quadrature for " + to_string(a) + " x " + to_string(b) +
                          " did not stabilize within " + std::to_string(opt.max_intervals) +
                          " intervals");
}

/// Complex transverse field sampled on a uniform grid, x fastest:
/// values[iy * nx + ix] is the sample at (x0 + ix dx, y0 + iy dy).
struct SampledField {
    double x0 = 0.0, dx = 0.0;
    double y0 = 0.0, dy = 0.0;
    int nx = 0, ny = 0;
    double z = 0.0;
    std::vector<complex> values;

    [[nodiscard]] double x(int ix) const { return x0 + ix * dx; }
    [[nodiscard]] double y(int iy) const { return y0 + iy * dy; }
    [[nodiscard]] complex at(int ix, int iy) const { return values[static_cast<size_t>(iy) * nx + ix]; }
};

/// Samples `f(TransversePoint)` on an n x n grid centred on the axis with
/// spacing extent / n (the point x = 0 is on the grid).
template <class Field>
SampledField sample_field(Field&& f, double extent, int n, double z = 0.0) {
    SampledField out;
    out.nx = out.ny = n;
    out.dx = out.dy = extent / n;
    out.x0 = out.y0 = -0.5 * n * out.dx;
    out.z = z;
    out.values.resize(static_cast<size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            out.values[static_cast<size_t>(iy) * n + ix] = f(TransversePoint{out.x(ix), out.y(iy), z});
    return out;
}

/// Superposition sum_nm c_nm u_nm at p; coefficients need not be normalized.
inline complex synthesize(const CoefficientMap& coeffs, const PumpGeometry& geom, TransversePoint p) {
    complex total{};
    for (const auto& [idx, c] : coeffs) total += c * egh_eval(idx, geom, p);
    return total;
}

/// Largest boundary sample magnitude relative to the peak magnitude.
inline double boundary_fraction(const SampledField& f) {
    double peak = 0.0, edge = 0.0;
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix) {
            const double a = std::abs(f.at(ix, iy));
            peak = std::max(peak, a);
            if (ix == 0 || iy == 0 || ix == f.nx - 1 || iy == f.ny - 1) edge = std::max(edge, a);
        }
    return peak > 0.0 ? edge / peak : 0.0;
}

struct Decomposition {
    ModeExpansion expansion;
    /// sum |c_nm|^2 of the projections before renormalization.
    double captured_power;
};

/// Projects a field sampled at the waist plane onto u_nm, n + m <= max_order:
/// c_nm = (sum field psi_nm dx dy) / f_nm, then renormalizes.
inline Decomposition decompose(const SampledField& field, const PumpGeometry& geom, int max_order) {
    if (max_order < 0) throw ConfigError("max_order must be nonnegative");
    if (field.nx < 2 || field.ny < 2 || field.values.size() != static_cast<size_t>(field.nx) * field.ny)
        throw ConfigError("sampled field has inconsistent dimensions");
    if (field.z != 0.0) throw ConfigError("decompose expects a field sampled at the waist (z = 0)");
    const double need = 5.0 * geom.waist() * (1.0 - 1e-9);
    if (field.x0 > -need || field.x(field.nx - 1) < need || field.y0 > -need ||
        field.y(field.ny - 1) < need)
        throw DomainError("sampled field must cover at least +-5 w0 on both axes");
    if (boundary_fraction(field) > 1e-6)
        throw DomainError("field at the grid boundary exceeds 1e-6 of its peak");

    CoefficientMap raw;
    for (ModeIndex idx : modes_up_to(max_order)) {
        complex sum{};
        for (int iy = 0; iy < field.ny; ++iy)
            for (int ix = 0; ix < field.nx; ++ix)
                sum += field.at(ix, iy) * psi_eval(idx, geom, {field.x(ix), field.y(iy), 0.0});
        raw[idx] = sum * (field.dx * field.dy) / overlap_norm(idx, geom);
    }
    const double power = norm_squared(raw);
    if (!(power > 1e-20))
        throw InsufficientPowerError("field has no measurable projection onto modes up to order " +
                                     std::to_string(max_order));
    return {ModeExpansion::normalized(std::move(raw), max_order), power};
}

/// Evaluation points and central-difference steps for the paraxial check.
struct ResidualGrid {
    std::vector<double> xs, ys, zs;
    double hx = 0.0, hy = 0.0, hz = 0.0;

    /// 7 x 7 transverse points across +-1.5 w0 on five planes between
    /// -z_r and z_r; steps w0/200 and z_r/200.
    static ResidualGrid reference(const PumpGeometry& geom) {
        ResidualGrid g;
        for (int k = -3; k <= 3; ++k) {
            g.xs.push_back(0.5 * k * geom.waist());
            g.ys.push_back(0.5 * k * geom.waist());
        }
        for (double f : {-1.0, -0.3, 0.0, 0.5, 1.0}) g.zs.push_back(f * geom.rayleigh_range());
        g.hx = g.hy = geom.waist() / 200.0;
        g.hz = geom.rayleigh_range() / 200.0;
        return g;
    }
};

/// max |lap_perp u + 2ik du/dz| / max |k^2 u| over the grid, by central
/// differences with k = 2 pi / lambda. `field` maps TransversePoint -> complex.
template <class Field>
double paraxial_residual(Field&& field, const PumpGeometry& geom, const ResidualGrid& grid) {
    const double k = geom.wavenumber();
    double worst = 0.0, scale = 0.0;
    for (double z : grid.zs)
        for (double y : grid.ys)
            for (double x : grid.xs) {
                const complex c = field(TransversePoint{x, y, z});
                const complex d2x = (field(TransversePoint{x + grid.hx, y, z}) - 2.0 * c +
                                     field(TransversePoint{x - grid.hx, y, z})) /
                                    (grid.hx * grid.hx);
                const complex d2y = (field(TransversePoint{x, y + grid.hy, z}) - 2.0 * c +
                                     field(TransversePoint{x, y - grid.hy, z})) /
                                    (grid.hy * grid.hy);
                const complex dz = (field(TransversePoint{x, y, z + grid.hz}) -
                                    field(TransversePoint{x, y, z - grid.hz})) /
                                   (2.0 * grid.hz);
                worst = std::max(worst, std::abs(d2x + d2y + 2.0 * imag_unit * k * dz));
                scale = std::max(scale, std::abs(k * k * c));
            }
    return scale > 0.0 ? worst / scale : 0.0;
}

inline double paraxial_residual(ModeIndex idx, const PumpGeometry& geom, const ResidualGrid& grid) {
    return paraxial_residual([&](TransversePoint p) { return egh_eval(idx, geom, p); }, geom, grid);
}

}  // namespace eghspdc
