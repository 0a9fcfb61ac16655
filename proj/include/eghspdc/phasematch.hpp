#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "eghspdc/constants.hpp"
#include "eghspdc/error.hpp"
#include "eghspdc/geometry.hpp"

namespace eghspdc {

/// In-medium spatial frequency (cycles per metre); |nu| = n f / c on shell.
struct SpatialFrequency {
    double nu_x = 0.0;
    double nu_y = 0.0;
    double nu_z = 0.0;

    friend SpatialFrequency operator+(const SpatialFrequency& a, const SpatialFrequency& b) {
        return {a.nu_x + b.nu_x, a.nu_y + b.nu_y, a.nu_z + b.nu_z};
    }
    [[nodiscard]] double perp_squared() const { return nu_x * nu_x + nu_y * nu_y; }
};

enum class MismatchConvention {
    /// 1/lambda - lambda nu_perp^2 - nu_z, as printed.
    PaperLiteral,
    /// 1/lambda - (lambda/2) nu_perp^2 - nu_z, the phase slope of the z integrand.
    ExponentConsistent,
};

/// chi[o][q][r] with o the pump, q the signal, r the idler Cartesian index.
using SusceptibilityTensor = std::array<std::array<std::array<complex, 3>, 3>, 3>;

struct CrystalConfig {
    double length = 0.0;
    /// Position of the segment centre relative to the pump focus along z.
    double delta_z = 0.0;
    /// Additional per-segment offsets; segment j spans
    /// [delta_z + offset_j - L/2, delta_z + offset_j + L/2].
    std::vector<double> segments{0.0};
    double n_p = 1.0, n_s = 1.0, n_i = 1.0;
    SusceptibilityTensor chi{};

    void validate() const {
        if (!(length > 0.0) || !std::isfinite(length))
            throw ConfigError("crystal length must be positive");
        if (!std::isfinite(delta_z)) throw ConfigError("crystal delta_z must be finite");
        for (double n : {n_p, n_s, n_i})
            if (!(n >= 1.0) || !std::isfinite(n)) throw ConfigError("refractive indices must be >= 1");
        validate_segments();
    }

    void validate_segments() const {
        if (segments.empty()) throw ConfigError("crystal needs at least one segment");
        for (size_t a = 0; a < segments.size(); ++a)
            for (size_t b = a + 1; b < segments.size(); ++b)
                if (std::abs(segments[a] - segments[b]) < length * (1.0 - 1e-12))
                    throw ConfigError("crystal segments " + std::to_string(a) + " and " +
                                      std::to_string(b) + " overlap");
    }

    /// z range occupied by segment j, in focus-centred coordinates.
    [[nodiscard]] std::array<double, 2> segment_span(size_t j) const {
        const double centre = delta_z + segments.at(j);
        return {centre - 0.5 * length, centre + 0.5 * length};
    }
};

/// Longitudinal momentum mismatch of a signal/idler pair against the pump.
inline double delta_nu(const SpatialFrequency& nu_s, const SpatialFrequency& nu_i,
                       const PumpGeometry& geom,
                       MismatchConvention conv = MismatchConvention::ExponentConsistent) {
    const SpatialFrequency sum = nu_s + nu_i;
    const double lambda = geom.wavelength();
    const double transverse = conv == MismatchConvention::PaperLiteral ? lambda * sum.perp_squared()
                                                                       : 0.5 * lambda * sum.perp_squared();
    return 1.0 / lambda - transverse - sum.nu_z;
}

/// Single-segment phase matching exp(i 2 pi dnu dz) sin(pi dnu L) / (pi dnu L).
inline complex phi(double dnu, const CrystalConfig& crystal) {
    const double x = pi * dnu * crystal.length;
    const double sinc = std::abs(x) < 1e-8 ? 1.0 : std::sin(x) / x;
    return std::exp(2.0 * pi * imag_unit * dnu * crystal.delta_z) * sinc;
}

/// Coherent sum of identical segments displaced along z.
inline complex phi_multi(double dnu, const CrystalConfig& crystal) {
    crystal.validate_segments();
    const complex single = phi(dnu, crystal);
    complex total{};
    for (double offset : crystal.segments)
        total += std::exp(2.0 * pi * imag_unit * dnu * offset) * single;
    return total;
}

/// Longitudinal spatial frequency of a propagating photon of frequency f in a
/// medium of index n with transverse frequency nu_perp.
inline double on_shell_nu_z(double f, double n, double nu_perp) {
    const double modulus = n * f / speed_of_light;
    const double rem = modulus * modulus - nu_perp * nu_perp;
    if (rem < 0.0)
        throw EvanescentError("transverse frequency " + std::to_string(nu_perp) +
                              " exceeds on-shell modulus " + std::to_string(modulus));
    return std::sqrt(rem);
}

}  // namespace eghspdc
