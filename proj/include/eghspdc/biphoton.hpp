#pragma once

// Biphoton amplitude for a pump expanded in elegant Gauss-Hermite modes:
//
//   psi(s, i) = P  u~(f_s + f_i) sqrt(f_s f_i) Phi(dnu) exp(-pi lambda z_r |nu_+perp|^2)
//               * sum_nm c_nm (-2 pi i w0 nu_+x)^n (-2 pi i w0 nu_+y)^m
//
// with nu_+ = nu_s + nu_i and P = 2 h chi_eff V u0, V = pi w0^2 L. The mode
// sum is the transverse transform of the pump evaluated at nu_+.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "eghspdc/constants.hpp"
#include "eghspdc/error.hpp"
#include "eghspdc/geometry.hpp"
#include "eghspdc/modes.hpp"
#include "eghspdc/phasematch.hpp"

namespace eghspdc {

using Vec3 = std::array<complex, 3>;

inline double norm(const Vec3& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

inline void require_unit(const Vec3& v, const char* what) {
    if (std::abs(norm(v) - 1.0) > 1e-9)
        throw ConfigError(std::string(what) + " polarization must be a unit vector");
}

struct PhotonMode {
    SpatialFrequency nu;
    double f = 0.0;  ///< temporal frequency, Hz
    Vec3 pol{complex{1.0}, complex{}, complex{}};

    /// Builds an on-shell photon in a medium of index n.
    static PhotonMode on_shell(double nu_x, double nu_y, double f, double n, Vec3 pol) {
        require_unit(pol, "photon");
        const double nu_z = on_shell_nu_z(f, n, std::hypot(nu_x, nu_y));
        return {{nu_x, nu_y, nu_z}, f, pol};
    }
};

/// sum_oqr chi^{oqr} e_p,o conj(e_s,q) conj(e_i,r).
inline complex chi_effective(const SusceptibilityTensor& chi, const Vec3& e_p, const Vec3& e_s,
                             const Vec3& e_i) {
    require_unit(e_p, "pump");
    require_unit(e_s, "signal");
    require_unit(e_i, "idler");
    complex total{};
    for (int o = 0; o < 3; ++o)
        for (int q = 0; q < 3; ++q)
            for (int r = 0; r < 3; ++r)
                total += chi[o][q][r] * e_p[o] * std::conj(e_s[q]) * std::conj(e_i[r]);
    return total;
}

struct PumpEnvelope {
    enum class Kind { CW, GaussianPulse };
    Kind kind = Kind::CW;
    double f_p = 0.0;       ///< centre frequency, Hz
    double sigma_f = 0.0;   ///< rms bandwidth, Hz (pulses)
    double cw_cell = 0.0;   ///< frequency-grid cell width for the CW delta, Hz

    void validate() const {
        if (!(f_p > 0.0)) throw ConfigError("pump centre frequency must be positive");
        if (kind == Kind::GaussianPulse && !(sigma_f > 0.0))
            throw ConfigError("pulse bandwidth sigma_f must be positive");
        if (kind == Kind::CW && !(cw_cell >= 0.0))
            throw ConfigError("CW frequency cell must be nonnegative");
    }
};

inline const char* to_string(PumpEnvelope::Kind kind) {
    return kind == PumpEnvelope::Kind::CW ? "cw" : "gaussian";
}

/// Pump spectral envelope u~(f_plus). The CW case is a Kronecker delta on
/// the frequency grid: 1 within half a cell of f_p, else 0.
inline complex envelope_eval(const PumpEnvelope& env, double f_plus) {
    if (!(f_plus > 0.0)) throw ConfigError("sum frequency must be positive");
    const double detune = f_plus - env.f_p;
    if (env.kind == PumpEnvelope::Kind::CW) return std::abs(detune) <= 0.5 * env.cw_cell ? 1.0 : 0.0;
    return std::exp(-detune * detune / (4.0 * env.sigma_f * env.sigma_f));
}

/// Everything about the source except the pump mode coefficients.
struct BiphotonSetup {
    PumpGeometry geom;
    CrystalConfig crystal;
    PumpEnvelope envelope;
    Vec3 pump_pol{complex{}, complex{}, complex{1.0}};
    MismatchConvention convention = MismatchConvention::ExponentConsistent;

    /// 2 h chi_eff V u0 for the given signal and idler polarizations.
    [[nodiscard]] complex prefactor(const Vec3& pol_s, const Vec3& pol_i) const {
        const complex chi_eff = chi_effective(crystal.chi, pump_pol, pol_s, pol_i);
        return 2.0 * planck * chi_eff * geom.area() * crystal.length * geom.u0();
    }
};

/// sum_nm c_nm (-2 pi i w0 nu_x)^n (-2 pi i w0 nu_y)^m; coefficients need not be normalized.
inline complex mode_sum(const CoefficientMap& coeffs, const PumpGeometry& geom, double nu_x,
                        double nu_y) {
    const complex unit = -2.0 * pi * imag_unit * geom.waist();
    complex total{};
    for (const auto& [idx, c] : coeffs) total += c * ipow(unit * nu_x, idx.n) * ipow(unit * nu_y, idx.m);
    return total;
}

namespace detail {

/// Amplitude without the prefactor, for any coefficient set.
inline complex jsa_shape(const CoefficientMap& coeffs, const BiphotonSetup& setup,
                         const PhotonMode& s, const PhotonMode& i) {
    const SpatialFrequency plus = s.nu + i.nu;
    const double dnu = delta_nu(s.nu, i.nu, setup.geom, setup.convention);
    const double damping = std::exp(-pi * setup.geom.wavelength() * setup.geom.rayleigh_range() *
                                    plus.perp_squared());
    return envelope_eval(setup.envelope, s.f + i.f) * std::sqrt(s.f * i.f) *
           phi_multi(dnu, setup.crystal) * damping * mode_sum(coeffs, setup.geom, plus.nu_x, plus.nu_y);
}

inline complex jsa_unnormalized(const CoefficientMap& coeffs, const BiphotonSetup& setup,
                                const PhotonMode& s, const PhotonMode& i) {
    return setup.prefactor(s.pol, i.pol) * jsa_shape(coeffs, setup, s, i);
}

}  // namespace detail

/// Joint amplitude for one signal/idler pair.
inline complex jsa_point(const ModeExpansion& expansion, const BiphotonSetup& setup,
                         const PhotonMode& s, const PhotonMode& i) {
    return detail::jsa_unnormalized(expansion.coefficients(), setup, s, i);
}

struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    /// count evenly spaced samples from min to max; a single sample sits at min.
    [[nodiscard]] std::vector<double> samples() const {
        if (count < 1) throw ConfigError("axis count must be >= 1");
        std::vector<double> out(count);
        for (int k = 0; k < count; ++k)
            out[k] = count == 1 ? min : min + (max - min) * k / (count - 1);
        return out;
    }
};

struct JsaGridSpec {
    AxisSpec nu_sx, nu_sy, nu_ix, nu_iy;
    double f_s = 0.0, f_i = 0.0;
    Vec3 pol_s{complex{1.0}, complex{}, complex{}};
    Vec3 pol_i{complex{}, complex{1.0}, complex{}};
};

/// Sampled amplitude shape over (nu_sx, nu_sy, nu_ix, nu_iy), nu_sx
/// outermost and nu_iy innermost. The amplitude is prefactor * value.
struct JointAmplitudeGrid {
    std::array<std::vector<double>, 4> axes;
    double f_s = 0.0, f_i = 0.0;
    complex prefactor;
    std::vector<complex> values;

    [[nodiscard]] size_t index(size_t a, size_t b, size_t c, size_t d) const {
        return ((a * axes[1].size() + b) * axes[2].size() + c) * axes[3].size() + d;
    }
    [[nodiscard]] complex amplitude(size_t a, size_t b, size_t c, size_t d) const {
        return prefactor * values[index(a, b, c, d)];
    }
};

inline JointAmplitudeGrid jsa_grid(const ModeExpansion& expansion, const BiphotonSetup& setup,
                                   const JsaGridSpec& spec) {
    setup.crystal.validate();
    setup.envelope.validate();
    JointAmplitudeGrid grid;
    grid.axes = {spec.nu_sx.samples(), spec.nu_sy.samples(), spec.nu_ix.samples(), spec.nu_iy.samples()};
    grid.f_s = spec.f_s;
    grid.f_i = spec.f_i;
    grid.prefactor = setup.prefactor(spec.pol_s, spec.pol_i);
    if (grid.prefactor == complex{})
        throw ConfigError("effective nonlinearity vanishes for the configured polarizations");

    const auto& [sx, sy, ix, iy] = grid.axes;
    // On-shell construction is separable per photon; collect every failure.
    std::vector<std::vector<PhotonMode>> signal(sx.size()), idler(ix.size());
    std::string bad;
    int bad_count = 0;
    auto build = [&](const std::vector<double>& ax, const std::vector<double>& ay, double f, double n,
                     const Vec3& pol, std::vector<std::vector<PhotonMode>>& out, const char* who) {
        for (size_t a = 0; a < ax.size(); ++a)
            for (size_t b = 0; b < ay.size(); ++b) {
                try {
                    out[a].push_back(PhotonMode::on_shell(ax[a], ay[b], f, n, pol));
                } catch (const EvanescentError&) {
                    out[a].push_back({});
                    if (bad_count++ < 16)
                        bad += std::string(bad.empty() ? "" : ", ") + who + "[" + std::to_string(a) +
                               "," + std::to_string(b) + "]";
                }
            }
    };
    build(sx, sy, spec.f_s, setup.crystal.n_s, spec.pol_s, signal, "signal");
    build(ix, iy, spec.f_i, setup.crystal.n_i, spec.pol_i, idler, "idler");
    if (bad_count > 0)
        throw EvanescentError("evanescent grid points (" + std::to_string(bad_count) + "): " + bad);

    grid.values.resize(sx.size() * sy.size() * ix.size() * iy.size());
    const CoefficientMap& coeffs = expansion.coefficients();
    for (size_t a = 0; a < sx.size(); ++a)
        for (size_t b = 0; b < sy.size(); ++b)
            for (size_t c = 0; c < ix.size(); ++c)
                for (size_t d = 0; d < iy.size(); ++d)
                    grid.values[grid.index(a, b, c, d)] =
                        detail::jsa_shape(coeffs, setup, signal[a][b], idler[c][d]);
    return grid;
}

/// Point-detector coincidence probability |amp window_s window_i|^2.
inline double coincidence_probability(complex amp, double window_s, double window_i) {
    if (!(window_s >= 0.0) || !(window_i >= 0.0))
        throw ConfigError("detector windows must be nonnegative");
    return std::norm(amp * window_s * window_i);
}

}  // namespace eghspdc
