#pragma once

// Bessel function of the first kind, order zero.
//
// Small |x|: ascending power series accumulated in long double, which absorbs
// the cancellation between terms of size up to ~1e4 near the switch point.
// Large |x|: Hankel asymptotic expansion truncated at its smallest term.

#include <cmath>
#include <numbers>

namespace rotorlab {

inline constexpr double bessel_series_limit = 15.0;

namespace detail {

inline double bessel_j0_series(double x) {
    const long double q = -0.25L * static_cast<long double>(x) * static_cast<long double>(x);
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int m = 1; m < 200; ++m) {
        term *= q / (static_cast<long double>(m) * m);
        sum += term;
        if (std::fabs(term) < 1e-22L) break;
    }
    return static_cast<double>(sum);
}

inline double bessel_j0_hankel(double x) {
    // c_k = (0,k) / (2x)^k with c_k / c_{k-1} = -(2k-1)^2 / (8 k x).
    const long double z = x;
    long double p = 1.0L;
    long double q = 0.0L;
    long double c = 1.0L;
    long double last = 1.0L;
    for (int k = 1; k < 200; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        const long double next = c * (-(odd * odd) / (8.0L * k * z));
        if (std::fabs(next) >= std::fabs(last)) break; // series has started to diverge
        c = next;
        last = next;
        // P collects even k with sign (-1)^(k/2), Q odd k with sign (-1)^((k-1)/2).
        const long double sign = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
        if (k % 2 == 0)
            p += sign * c;
        else
            q += sign * c;
        if (std::fabs(c) < 1e-22L) break;
    }
    const double s = std::sin(x);
    const double co = std::cos(x);
    const long double cos_chi = (static_cast<long double>(co) + s) / std::numbers::sqrt2_v<long double>;
    const long double sin_chi = (static_cast<long double>(s) - co) / std::numbers::sqrt2_v<long double>;
    const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * z));
    return static_cast<double>(amp * (p * cos_chi - q * sin_chi));
}

} // namespace detail

inline double bessel_j0(double x) {
    x = std::fabs(x);
    return x <= bessel_series_limit ? detail::bessel_j0_series(x) : detail::bessel_j0_hankel(x);
}

} // namespace rotorlab
