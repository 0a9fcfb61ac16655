#pragma once

// Independent numerical references used by the validation suite and the
// tests. Nothing here calls the closed forms it is meant to check: modes
// are differentiated numerically, transforms are summed in real space and
// longitudinal integrals are done by adaptive quadrature.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "eghspdc/biphoton.hpp"
#include "eghspdc/constants.hpp"
#include "eghspdc/error.hpp"
#include "eghspdc/geometry.hpp"
#include "eghspdc/modes.hpp"
#include "eghspdc/phasematch.hpp"

namespace eghspdc::oracle {

/// Finite-difference weights for the `deriv`-th derivative at 0 on the
/// given stencil offsets (Fornberg's recursion).
inline std::vector<double> fd_weights(int deriv, const std::vector<double>& nodes) {
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(deriv + 1, 0.0));
    double c1 = 1.0, c4 = nodes[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, deriv);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][deriv];
    return w;
}

/// The paraxial kernel exp(-pi rho^2 / (lambda z_r xi)), continued to complex x, y.
inline complex gaussian_kernel(complex x, complex y, const PumpGeometry& geom, double z) {
    return std::exp(-pi * (x * x + y * y) / (geom.wavelength() * geom.rayleigh_range() * xi(z, geom)));
}

/// d^n/dx^n d^m/dy^m of the kernel by a central finite-difference stencil
/// with `half` points on each side and spacing h.
inline complex kernel_derivative_fd(ModeIndex idx, const PumpGeometry& geom, TransversePoint p, double h,
                                    int half = 6) {
    std::vector<double> nodes;
    for (int k = -half; k <= half; ++k) nodes.push_back(k);
    const std::vector<double> wx = fd_weights(idx.n, nodes);
    const std::vector<double> wy = fd_weights(idx.m, nodes);
    complex total{};
    for (int a = 0; a < static_cast<int>(nodes.size()); ++a) {
        if (wx[a] == 0.0) continue;
        for (int b = 0; b < static_cast<int>(nodes.size()); ++b) {
            if (wy[b] == 0.0) continue;
            total += wx[a] * wy[b] * gaussian_kernel(p.x + nodes[a] * h, p.y + nodes[b] * h, geom, p.z);
        }
    }
    return total / (std::pow(h, idx.n) * std::pow(h, idx.m));
}

/// d^n/dx^n d^m/dy^m of the kernel by nested Cauchy contour integrals of
/// radius r, each discretized with `nodes` trapezoid points.
inline complex kernel_derivative_cauchy(ModeIndex idx, const PumpGeometry& geom, TransversePoint p,
                                        double r, int nodes = 48) {
    std::vector<complex> unit(nodes);
    for (int k = 0; k < nodes; ++k) unit[k] = std::exp(2.0 * pi * imag_unit * (double(k) / nodes));
    complex total{};
    for (int a = 0; a < nodes; ++a) {
        const complex hx = r * unit[a];
        const complex wx = std::pow(unit[a], -idx.n);
        for (int b = 0; b < nodes; ++b) {
            const complex hy = r * unit[b];
            total += wx * std::pow(unit[b], -idx.m) * gaussian_kernel(p.x + hx, p.y + hy, geom, p.z);
        }
    }
    double fact = 1.0;
    for (int k = 2; k <= idx.n; ++k) fact *= k;
    for (int k = 2; k <= idx.m; ++k) fact *= k;
    return total * fact / (double(nodes) * nodes * std::pow(r, idx.n + idx.m));
}

/// u_nm from its derivative definition u0 (-w0)^(n+m) / xi d^n d^m kernel,
/// with the derivative taken by contour integration.
inline complex mode_from_derivative(ModeIndex idx, const PumpGeometry& geom, TransversePoint p) {
    const double r = 0.7 * geom.waist() * std::sqrt(std::abs(xi(p.z, geom)));
    return geom.u0() * std::pow(-geom.waist(), idx.order()) / xi(p.z, geom) *
           kernel_derivative_cauchy(idx, geom, p, r);
}

/// int int field(x, y, z) exp(-2 pi i (nu_x x + nu_y y)) dx dy by a trapezoid
/// rule over +-half_width_radii beam radii with `per_waist` samples per w0.
template <class Field>
complex transverse_integral(Field&& field, const PumpGeometry& geom, double z, double nu_x, double nu_y,
                            double half_width_radii = 10.0, int per_waist = 6) {
    const double half = half_width_radii * geom.waist() * std::max(1.0, std::abs(xi(z, geom)));
    const double h = geom.waist() / per_waist;
    const int n = static_cast<int>(std::ceil(half / h));
    std::vector<complex> ex(2 * n + 1), ey(2 * n + 1);
    for (int k = -n; k <= n; ++k) {
        ex[k + n] = std::exp(-2.0 * pi * imag_unit * nu_x * (k * h));
        ey[k + n] = std::exp(-2.0 * pi * imag_unit * nu_y * (k * h));
    }
    complex total{};
    for (int iy = -n; iy <= n; ++iy) {
        complex row{};
        for (int ix = -n; ix <= n; ++ix) row += field(TransversePoint{ix * h, iy * h, z}) * ex[ix + n];
        total += row * ey[iy + n];
    }
    return total * (h * h);
}

/// Sum over segments of int_span exp(i 2 pi dnu z) dz, Gauss-Kronrod on
/// panels no longer than half an oscillation period.
inline complex longitudinal_integral(double dnu, const CrystalConfig& crystal) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [dnu](double z) { return std::exp(2.0 * pi * imag_unit * dnu * z); };
    complex total{};
    for (size_t j = 0; j < crystal.segments.size(); ++j) {
        const auto [a, b] = crystal.segment_span(j);
        const int panels = 1 + static_cast<int>(std::ceil(2.0 * std::abs(dnu) * (b - a)));
        const double h = (b - a) / panels;
        for (int k = 0; k < panels; ++k)
            total += gauss_kronrod<double, 31>::integrate(f, a + k * h, a + (k + 1) * h, 0);
    }
    return total;
}

/// int_crystal dz int int dx dy u_pump(r) exp(i 2 pi z / lambda) exp(-2 pi i nu_+ . r),
/// with u_pump the real-space superposition of u_nm.
inline complex crystal_volume_integral(const CoefficientMap& coeffs, const PumpGeometry& geom,
                                       const CrystalConfig& crystal, const SpatialFrequency& nu_plus,
                                       double rel_tol = 1e-8) {
    using boost::math::quadrature::gauss_kronrod;
    auto pump = [&](TransversePoint p) { return synthesize(coeffs, geom, p); };
    auto slice = [&](double z) {
        return transverse_integral(pump, geom, z, nu_plus.nu_x, nu_plus.nu_y) *
               std::exp(2.0 * pi * imag_unit * z * (1.0 / geom.wavelength() - nu_plus.nu_z));
    };
    complex total{};
    for (size_t j = 0; j < crystal.segments.size(); ++j) {
        const auto [a, b] = crystal.segment_span(j);
        total += gauss_kronrod<double, 15>::integrate(slice, a, b, 6, rel_tol);
    }
    return total;
}

/// Random unit-norm coefficients over `modes` (complex normal, normalized).
template <class Rng>
CoefficientMap random_unit_coefficients(const std::vector<ModeIndex>& modes, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CoefficientMap c;
    double s = 0.0;
    for (ModeIndex idx : modes) {
        const complex v{gauss(rng), gauss(rng)};
        c[idx] = v;
        s += std::norm(v);
    }
    for (auto& [idx, v] : c) v /= std::sqrt(s);
    return c;
}

}  // namespace eghspdc::oracle
