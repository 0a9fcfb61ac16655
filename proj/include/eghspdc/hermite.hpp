#pragma once

#include "eghspdc/constants.hpp"

namespace eghspdc {

// Physicists' Hermite polynomial by the three-term recurrence
//   H_{k+1}(w) = 2 w H_k(w) - 2 k H_{k-1}(w),  H_0 = 1, H_1 = 2w.
// Valid for complex arguments; T is double or std::complex<double>.
template <class T>
constexpr T hermite(int n, T w) {
    T h0{1};
    if (n <= 0) return h0;
    T h1 = T{2} * w;
    for (int k = 1; k < n; ++k) {
        T next = T{2} * w * h1 - T{2.0 * k} * h0;
        h0 = h1;
        h1 = next;
    }
    return h1;
}

}  // namespace eghspdc
