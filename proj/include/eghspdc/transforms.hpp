#pragma once

// Transverse Fourier transforms with kernel exp(-2 pi i nu . r), no
// normalization prefactor:
//
//   F(nu_x, nu_y, z) = int int f(x, y, z) exp(-2 pi i (nu_x x + nu_y y)) dx dy
//
// egh_transverse_ft is the analytic transform of u_nm; dft_oracle is the
// sampled approximation used to check it.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "eghspdc/constants.hpp"
#include "eghspdc/error.hpp"
#include "eghspdc/geometry.hpp"
#include "eghspdc/hermite.hpp"
#include "eghspdc/modes.hpp"

namespace eghspdc {

namespace detail {

inline complex egh_transverse_ft_signed(ModeIndex idx, const PumpGeometry& geom, double nu_x,
                                        double nu_y, double z, double monomial_sign) {
    const complex unit = monomial_sign * 2.0 * pi * imag_unit * geom.waist();
    const double nu2 = nu_x * nu_x + nu_y * nu_y;
    return geom.u0() * geom.area() * ipow(unit * nu_x, idx.n) * ipow(unit * nu_y, idx.m) *
           std::exp(-pi * geom.wavelength() * geom.rayleigh_range() * xi(z, geom) * nu2);
}

}  // namespace detail

/// FT_perp(u_nm) = u0 A (-2 pi i w0 nu_x)^n (-2 pi i w0 nu_y)^m exp(-pi lambda z_r xi nu^2),
/// with A = pi w0^2.
inline complex egh_transverse_ft(ModeIndex idx, const PumpGeometry& geom, double nu_x, double nu_y,
                                 double z) {
    return detail::egh_transverse_ft_signed(idx, geom, nu_x, nu_y, z, -1.0);
}

/// Spectrum on the DFT-conjugate grid, nu_x fastest like SampledField.
struct SampledSpectrum {
    std::vector<double> nu_x, nu_y;
    std::vector<complex> values;

    [[nodiscard]] int nx() const { return static_cast<int>(nu_x.size()); }
    [[nodiscard]] int ny() const { return static_cast<int>(nu_y.size()); }
    [[nodiscard]] complex at(int ix, int iy) const {
        return values[static_cast<size_t>(iy) * nu_x.size() + ix];
    }
    /// Nyquist frequency of the x axis.
    [[nodiscard]] double nyquist_x() const { return -nu_x.front(); }
    [[nodiscard]] double nyquist_y() const { return -nu_y.front(); }
};

namespace detail {

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
struct FftwPlanDestroy {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDestroy>;

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place forward DFT of `data` laid out row-major ny x nx (ny == 1 for 1-D).
inline void forward_dft(std::vector<complex>& data, int nx, int ny) {
    FftwBuffer buf(fftw_alloc_complex(data.size()));
    if (!buf) throw NumericalError("fftw allocation failed");
    FftwPlan plan(ny == 1 ? fftw_plan_dft_1d(nx, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE)
                          : fftw_plan_dft_2d(ny, nx, buf.get(), buf.get(), FFTW_FORWARD,
                                             FFTW_ESTIMATE));
    if (!plan) throw NumericalError("fftw planning failed");
    for (size_t k = 0; k < data.size(); ++k) {
        buf[k][0] = data[k].real();
        buf[k][1] = data[k].imag();
    }
    fftw_execute(plan.get());
    for (size_t k = 0; k < data.size(); ++k) data[k] = {buf[k][0], buf[k][1]};
}

/// Centred frequency axis (k - n/2) / (n d), k = 0..n-1.
inline std::vector<double> frequency_axis(int n, double d) {
    std::vector<double> nu(n);
    for (int k = 0; k < n; ++k) nu[k] = (k - n / 2) / (n * d);
    return nu;
}

}  // namespace detail

/// Approximates the continuous transverse FT of a sampled field.
///
/// Samples are modulated by (-1)^(ix+iy) so DFT bin k lands on frequency
/// (k - n/2) / (n dx), and each output is multiplied by
/// dx dy exp(-2 pi i (nu_x x0 + nu_y y0)) to account for the grid origin.
/// The grid must be 2^k x 2^k and the field must have decayed below 1e-6
/// of its peak on the boundary.
inline SampledSpectrum dft_oracle(const SampledField& field) {
    if (field.nx != field.ny || !detail::is_power_of_two(field.nx))
        throw ConfigError("dft_oracle needs a square 2^k x 2^k grid");
    if (field.values.size() != static_cast<size_t>(field.nx) * field.ny)
        throw ConfigError("sampled field has inconsistent dimensions");
    if (boundary_fraction(field) > 1e-6)
        throw DomainError("boundary leakage: field at the grid edge exceeds 1e-6 of its peak");

    const int n = field.nx;
    std::vector<complex> data = field.values;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if ((ix + iy) % 2) data[static_cast<size_t>(iy) * n + ix] *= -1.0;
    detail::forward_dft(data, n, n);

    SampledSpectrum out;
    out.nu_x = detail::frequency_axis(n, field.dx);
    out.nu_y = detail::frequency_axis(n, field.dy);
    std::vector<complex> phase_x(n), phase_y(n);
    for (int k = 0; k < n; ++k) {
        phase_x[k] = std::exp(-2.0 * pi * imag_unit * out.nu_x[k] * field.x0);
        phase_y[k] = std::exp(-2.0 * pi * imag_unit * out.nu_y[k] * field.y0);
    }
    // With the input modulated, DFT bin k is already the frequency nu[k].
    const double cell = field.dx * field.dy;
    out.values.resize(data.size());
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) {
            const size_t at = static_cast<size_t>(ky) * n + kx;
            out.values[at] = cell * data[at] * phase_x[kx] * phase_y[ky];
        }
    return out;
}

/// 1-D counterpart of dft_oracle: samples f_j at x0 + j dx, j < n = 2^k.
/// Returns the spectrum on the centred axis `nu`.
inline std::vector<complex> dft_oracle_1d(std::vector<complex> samples, double x0, double dx,
                                          std::vector<double>* nu = nullptr) {
    const int n = static_cast<int>(samples.size());
    if (!detail::is_power_of_two(n)) throw ConfigError("dft_oracle_1d needs 2^k samples");
    double peak = 0.0;
    for (const complex& v : samples) peak = std::max(peak, std::abs(v));
    if (std::max(std::abs(samples.front()), std::abs(samples.back())) > 1e-6 * peak)
        throw DomainError("boundary leakage: samples at the edge exceed 1e-6 of the peak");
    for (int j = 1; j < n; j += 2) samples[j] *= -1.0;
    detail::forward_dft(samples, n, 1);
    const std::vector<double> axis = detail::frequency_axis(n, dx);
    for (int k = 0; k < n; ++k) samples[k] *= dx * std::exp(-2.0 * pi * imag_unit * axis[k] * x0);
    if (nu) *nu = axis;
    return samples;
}

/// int int |f|^2 dx dy of a sampled field.
inline double field_energy(const SampledField& field) {
    double s = 0.0;
    for (const complex& v : field.values) s += std::norm(v);
    return s * field.dx * field.dy;
}

/// int int |F|^2 dnu_x dnu_y of a sampled spectrum.
inline double spectrum_energy(const SampledSpectrum& spec) {
    double s = 0.0;
    for (const complex& v : spec.values) s += std::norm(v);
    return s * (spec.nu_x[1] - spec.nu_x[0]) * (spec.nu_y[1] - spec.nu_y[0]);
}

/// Relative L2 distance between `spec` and `analytic(nu_x, nu_y)` over the
/// samples with |nu_x|, |nu_y| <= fraction * Nyquist.
template <class Analytic>
double relative_l2_error(const SampledSpectrum& spec, Analytic&& analytic, double fraction = 0.5) {
    const double lim_x = fraction * spec.nyquist_x();
    const double lim_y = fraction * spec.nyquist_y();
    double num = 0.0, den = 0.0;
    for (int iy = 0; iy < spec.ny(); ++iy) {
        if (std::abs(spec.nu_y[iy]) > lim_y) continue;
        for (int ix = 0; ix < spec.nx(); ++ix) {
            if (std::abs(spec.nu_x[ix]) > lim_x) continue;
            const complex ref = analytic(spec.nu_x[ix], spec.nu_y[iy]);
            num += std::norm(spec.at(ix, iy) - ref);
            den += std::norm(ref);
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Checks FT(d^n/dx^n f(x/a)) = a (2 pi i nu)^n F(a nu) for the Gaussian
/// pair f(x) = exp(-pi x^2), F(nu) = exp(-pi nu^2), with no extra factor
/// of a on the frequency. The derivative is sampled in closed form on
/// `samples` points spanning +-10 a and transformed by dft_oracle_1d.
/// Returns max |dft - analytic| / max |analytic| over |nu| <= Nyquist / 2.
inline double scaling_rule_check(int n, double a, int samples) {
    if (n < 0 || n > 4) throw ConfigError("scaling_rule_check supports 0 <= n <= 4");
    if (!(a > 0.0)) throw ConfigError("scale a must be positive");
    const double extent = 20.0 * a;
    const double dx = extent / samples;
    const double x0 = -0.5 * samples * dx;
    // d^n/dx^n exp(-(c x)^2) = (-c)^n H_n(c x) exp(-(c x)^2), c = sqrt(pi) / a
    const double c = std::sqrt(pi) / a;
    std::vector<complex> f(samples);
    for (int j = 0; j < samples; ++j) {
        const double t = c * (x0 + j * dx);
        f[j] = ipow(-c, n) * hermite(n, t) * std::exp(-t * t);
    }
    std::vector<double> nu;
    const std::vector<complex> spec = dft_oracle_1d(std::move(f), x0, dx, &nu);
    const double limit = 0.5 * -nu.front();
    double worst = 0.0, peak = 0.0;
    for (int k = 0; k < samples; ++k) {
        if (std::abs(nu[k]) > limit) continue;
        const complex ref = a * ipow(2.0 * pi * imag_unit * nu[k], n) * std::exp(-pi * a * a * nu[k] * nu[k]);
        worst = std::max(worst, std::abs(spec[k] - ref));
        peak = std::max(peak, std::abs(ref));
    }
    return worst / peak;
}

}  // namespace eghspdc
