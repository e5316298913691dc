#pragma once

// Closed-form fidelity predictions near the ell = 1 resonance.
//
//   exact resonance (epsilon = 0):   F = J0^2(|W_t| dk)
//   short times:                     F = J0^2(B(beta, t)),  B = 2 (dk / bbar) sin(bbar t / 2)
//   harmonic island, beta ensemble:  F ~ eps^2 w1 w2 / (8 pi^2 b^2 |4 w1 w2 - w+^2 cos(w- t) - w-^2 cos(w+ t)|)
//   harmonic island, resonant beta:  F ~ (eps / 2 pi) / |w2 cos(w1 t) sin(w2 t) - w1 cos(w2 t) sin(w1 t)|
//
// The harmonic formulas have singular times; those samples are returned as
// +infinity with the singular flag set, never clipped.

#include "rotorlab/bessel.hpp"
#include "rotorlab/core_model.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/pseudoclassical_map.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotorlab {

/// Divisor magnitudes below this are treated as singular.
inline constexpr double singular_divisor = 1e-9;
/// Below this argument, removable singularities use their series.
inline constexpr double series_branch = 1e-6;

struct AnalyticSample {
    double value = 0;
    bool singular = false;
};

namespace detail {

inline AnalyticSample reciprocal_sample(double numerator, double divisor) {
    const double d = std::abs(divisor);
    if (d < singular_divisor) return {std::numeric_limits<double>::infinity(), true};
    return {numerator / d, false};
}

/// sin(u)/u
inline double sinc(double u) {
    if (std::abs(u) < series_branch) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

} // namespace detail

/// |sin(pi t ell (beta - 1/2)) / sin(pi ell (beta - 1/2))|, with the limit t at resonant beta.
inline double resonant_weight(int ell, double beta, int t) {
    const double x = pi * ell * (beta - 0.5);
    // Shift by a multiple of pi; the ratio only changes sign.
    const double y = x - pi * std::nearbyint(x / pi);
    const double tt = static_cast<double>(t);
    if (std::abs(y) < series_branch) return std::abs(tt * (1.0 - (tt * tt - 1.0) * y * y / 6.0));
    return std::abs(std::sin(tt * y) / std::sin(y));
}

inline double exact_resonance_fidelity(const RotorParams& p, int t) {
    if (p.epsilon() != 0.0) throw std::invalid_argument("exact-resonance law needs tau = 2 pi ell (epsilon = 0)");
    if (t < 0) throw std::invalid_argument("t must be >= 0");
    const double j = bessel_j0(resonant_weight(p.ell(), p.beta(), t) * p.delta_k());
    return j * j;
}

/// 2 (dk / bbar) sin(bbar t / 2), continuous through bbar = 0.
inline double short_time_argument(const RotorParams& p, double t) {
    const double u = 0.5 * p.beta_bar() * t;
    return p.delta_k() * t * detail::sinc(u);
}

inline double pseudoclassical_fidelity(const RotorParams& p, int t) {
    if (p.epsilon() == 0.0) throw std::invalid_argument("pseudo-classical law needs epsilon != 0");
    if (p.ell() != 1) throw std::invalid_argument("pseudo-classical law is formulated for ell = 1");
    const double j = bessel_j0(short_time_argument(p, t));
    return j * j;
}

struct HarmonicCoefficients {
    double A = 0; // w2 tan(w2 t) - w1 tan(w1 t)
    double B = 0; // sec(w2 t) - sec(w1 t)
    double C = 0; // tan(w2 t)/w2 - tan(w1 t)/w1
    bool singular = false;
};

inline HarmonicCoefficients harmonic_coefficients(double w1, double w2, double t) {
    HarmonicCoefficients h;
    const double c1 = std::cos(w1 * t);
    const double c2 = std::cos(w2 * t);
    if (std::abs(c1) < singular_divisor || std::abs(c2) < singular_divisor) {
        h.singular = true;
        h.A = h.B = h.C = std::numeric_limits<double>::quiet_NaN();
        return h;
    }
    const double t1 = std::tan(w1 * t);
    const double t2 = std::tan(w2 * t);
    h.A = w2 * t2 - w1 * t1;
    h.B = 1.0 / c2 - 1.0 / c1;
    h.C = t2 / w2 - t1 / w1;
    return h;
}

inline HarmonicCoefficients harmonic_coefficients(const RotorParams& p, double t) {
    return harmonic_coefficients(p.omega1(), p.omega2(), t);
}

/// 4 w1 w2 - w+^2 cos(w- t) - w-^2 cos(w+ t)
inline double ensemble_divisor(double w1, double w2, double t) {
    const double wp = w1 + w2;
    const double wm = w1 - w2;
    return 4.0 * w1 * w2 - wp * wp * std::cos(wm * t) - wm * wm * std::cos(wp * t);
}

/// w2 cos(w1 t) sin(w2 t) - w1 cos(w2 t) sin(w1 t)
inline double resonant_divisor(double w1, double w2, double t) {
    return w2 * std::cos(w1 * t) * std::sin(w2 * t) - w1 * std::cos(w2 * t) * std::sin(w1 * t);
}

/// Throws OutsideIsland when b exceeds the island halfwidth. Returns warnings
/// for configurations outside the asymptotic regime (epsilon not small against b^2).
inline std::vector<std::string> check_ensemble_width(const RotorParams& p, double b) {
    if (p.epsilon() == 0.0) throw std::invalid_argument("harmonic ensemble law needs epsilon != 0");
    if (!(b > 0.0)) throw std::invalid_argument("ensemble halfwidth b must be > 0");
    std::vector<std::string> warnings;
    if (p.delta_k() == 0.0) return warnings;
    const double limit = min_island_halfwidth_beta(p);
    if (b > limit)
        throw OutsideIsland("ensemble halfwidth b=" + std::to_string(b) + " exceeds the island halfwidth " +
                            std::to_string(limit) + " in beta");
    if (std::abs(p.epsilon()) > b * b)
        warnings.push_back("epsilon=" + std::to_string(std::abs(p.epsilon())) + " is not small against b^2=" +
                           std::to_string(b * b) + "; harmonic ensemble law is outside its asymptotic regime");
    return warnings;
}

inline AnalyticSample harmonic_ensemble_fidelity(const RotorParams& p, double b, double t) {
    check_ensemble_width(p, b);
    if (p.delta_k() == 0.0) return {1.0, false};
    const double w1 = p.omega1();
    const double w2 = p.omega2();
    const double eps = p.epsilon();
    return detail::reciprocal_sample(eps * eps * w1 * w2 / (8.0 * pi * pi * b * b), ensemble_divisor(w1, w2, t));
}

/// Same law before trigonometric simplification:
/// eps^2 / (16 pi^2 b^2 |C A - B^2| |cos(w1 t) cos(w2 t)|).
inline AnalyticSample harmonic_ensemble_fidelity_from_coefficients(const RotorParams& p, double b, double t) {
    check_ensemble_width(p, b);
    if (p.delta_k() == 0.0) return {1.0, false};
    const auto h = harmonic_coefficients(p, t);
    if (h.singular) return {std::numeric_limits<double>::infinity(), true};
    const double eps = p.epsilon();
    const double divisor = (h.C * h.A - h.B * h.B) * std::cos(p.omega1() * t) * std::cos(p.omega2() * t);
    return detail::reciprocal_sample(eps * eps / (16.0 * pi * pi * b * b), divisor);
}

inline AnalyticSample harmonic_resonant_fidelity(const RotorParams& p, double t) {
    if (p.epsilon() == 0.0) throw std::invalid_argument("harmonic resonant law needs epsilon != 0");
    if (p.delta_k() == 0.0) return {1.0, false};
    return detail::reciprocal_sample(std::abs(p.epsilon()) / two_pi, resonant_divisor(p.omega1(), p.omega2(), t));
}

/// Sample an analytic law on [t_begin, t_end] with `per_kick` points per kick.
template <class Law>
FidelityCurve sample_analytic(Law&& law, double t_begin, double t_end, int per_kick, CurveKind kind) {
    if (per_kick < 1) throw std::invalid_argument("per_kick must be >= 1");
    if (!(t_end >= t_begin)) throw std::invalid_argument("empty sampling range");
    FidelityCurve c;
    c.kind = kind;
    const auto n = static_cast<std::size_t>(std::llround((t_end - t_begin) * per_kick)) + 1;
    c.times.reserve(n);
    c.values.reserve(n);
    c.singular.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_begin + static_cast<double>(i) / per_kick;
        const AnalyticSample s = law(t);
        c.times.push_back(t);
        c.values.push_back(s.value);
        c.singular.push_back(s.singular ? 1 : 0);
    }
    return c;
}

} // namespace rotorlab
