#pragma once

#include <complex>
#include <numbers>

namespace eghspdc {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr complex imag_unit{0.0, 1.0};

/// (-i)^k for integer k >= 0, exact.
constexpr complex minus_i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

/// i^k for integer k >= 0, exact.
constexpr complex i_pow(int k) { return minus_i_pow(-k); }

/// z^k by repeated multiplication; 0^0 == 1.
template <class T>
constexpr T ipow(T z, int k) {
    T r{1};
    for (int j = 0; j < k; ++j) r *= z;
    return r;
}

}  // namespace eghspdc
