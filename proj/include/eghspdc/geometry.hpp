#pragma once

#include <cmath>
#include <string>

#include "eghspdc/constants.hpp"
#include "eghspdc/error.hpp"

namespace eghspdc {

/// Circular pump beam. `wavelength` is the in-medium wavelength
/// (free-space wavelength divided by the pump index); the Rayleigh range
/// is derived from it and the waist and cannot be set independently.
class PumpGeometry {
public:
    PumpGeometry(double wavelength, double waist, complex u0 = {1.0, 0.0})
        : wavelength_(wavelength), waist_(waist), u0_(u0) {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw ConfigError("pump wavelength must be positive, got " + std::to_string(wavelength));
        if (!(waist > 0.0) || !std::isfinite(waist))
            throw ConfigError("pump waist must be positive, got " + std::to_string(waist));
        rayleigh_ = pi * waist * waist / wavelength;
    }

    [[nodiscard]] double wavelength() const { return wavelength_; }
    [[nodiscard]] double waist() const { return waist_; }
    [[nodiscard]] double rayleigh_range() const { return rayleigh_; }
    [[nodiscard]] complex u0() const { return u0_; }
    [[nodiscard]] double wavenumber() const { return 2.0 * pi / wavelength_; }
    /// pi w0^2, the transverse beam area.
    [[nodiscard]] double area() const { return pi * waist_ * waist_; }

private:
    double wavelength_;
    double waist_;
    double rayleigh_;
    complex u0_;
};

struct TransversePoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Complex beam parameter 1 + i z / z_r.
inline complex xi(double z, const PumpGeometry& geom) {
    return {1.0, z / geom.rayleigh_range()};
}

}  // namespace eghspdc
