#pragma once

// Reference computations used only by the tests. None of these share code
// paths with the library routines they check.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using cplx = std::complex<double>;

/// J0 from its ascending series in 50-digit arithmetic. Good to ~1e-25 for |x| <= 50.
inline double j0_series(double x) {
    const mp50 z = x;
    const mp50 q = -z * z / 4;
    mp50 term = 1;
    mp50 sum = 1;
    for (int m = 1; m < 1000; ++m) {
        term *= q / (mp50(m) * m);
        sum += term;
        if (abs(term) < mp50("1e-40")) break;
    }
    return static_cast<double>(sum);
}

/// Smallest positive zero of J0 by bisection on the 50-digit series.
inline double j0_first_zero() {
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (j0_series(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// (1/2pi) \int dtheta exp(-i k cos theta) exp(-i n theta) by the trapezoidal
/// rule on `points` nodes; spectrally accurate for a periodic analytic integrand.
inline cplx kick_matrix_element(int n, double k, int points = 4096) {
    cplx s{0.0, 0.0};
    for (int j = 0; j < points; ++j) {
        const double th = 2.0 * std::numbers::pi * j / points;
        s += std::polar(1.0, -k * std::cos(th) - n * th);
    }
    return s / static_cast<double>(points);
}

/// (1/2pi) \int dtheta exp(i a cos theta), i.e. J0(a), by quadrature.
inline double cosine_phase_average(double a, int points = 4096) {
    cplx s{0.0, 0.0};
    for (int j = 0; j < points; ++j) s += std::polar(1.0, a * std::cos(2.0 * std::numbers::pi * j / points));
    return (s / static_cast<double>(points)).real();
}

/// One Floquet period by direct convolution in momentum space:
/// <n| exp(-ik cos) |m> = (-i)^(n-m) J_{n-m}(k). O(N^2); independent of the FFT route.
inline std::vector<cplx> floquet_by_convolution(const std::vector<cplx>& amps, int n_max, double tau, double beta,
                                                double k) {
    const int size = 2 * n_max + 1;
    std::vector<cplx> free(amps.size());
    for (int n = -n_max; n <= n_max; ++n) {
        const double q = n + beta;
        free[n + n_max] = amps[n + n_max] * std::polar(1.0, -0.5 * tau * q * q);
    }
    std::vector<cplx> bessel(2 * size);
    const cplx minus_i{0.0, -1.0};
    for (int d = -(size - 1); d <= size - 1; ++d) {
        const double j = boost::math::cyl_bessel_j(std::abs(d), k) * ((d < 0 && (d % 2 != 0)) ? -1.0 : 1.0);
        bessel[d + size] = std::pow(minus_i, d) * j;
    }
    std::vector<cplx> out(amps.size(), cplx{0.0, 0.0});
    for (int n = -n_max; n <= n_max; ++n)
        for (int m = -n_max; m <= n_max; ++m) out[n + n_max] += bessel[n - m + size] * free[m + n_max];
    return out;
}

} // namespace oracle
