#pragma once

// Gaussian smoothing of fidelity curves.
//
// The harmonic laws diverge like 1/|t - t*| at isolated times, which is not
// integrable. Before convolving, values are capped at `ceiling` (default 1, the
// physical bound on a fidelity) and singular samples are set to the cap. The
// result converges as the sub-kick sampling is refined; smooth_analytic checks
// that it has.

#include "rotorlab/analytic.hpp"
#include "rotorlab/core_model.hpp"
#include "rotorlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotorlab {

inline constexpr double default_smoothing_sigma = 6.0;
inline constexpr int default_subsamples = 32;

struct SmoothingOptions {
    double ceiling = 1.0;
    /// Kernel truncated at this many standard deviations.
    double cutoff = 8.0;
};

/// Unit-area Gaussian convolution evaluated at `at`. The kernel is renormalised
/// over the available samples, so curve edges are not biased towards zero.
inline FidelityCurve smooth_at(const FidelityCurve& curve, double sigma, std::span<const double> at,
                               const SmoothingOptions& opt = {}) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    curve.validate();
    const std::size_t n = curve.size();
    if (n < 2) throw std::invalid_argument("smoothing needs at least two samples");
    const double h = (curve.times.back() - curve.times.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(curve.times[i] - curve.times[i - 1] - h) > 1e-9 * std::max(1.0, h))
            throw std::invalid_argument("smoothing needs a uniform time grid");

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = curve.values[i];
        v[i] = (curve.is_singular(i) || !(x <= opt.ceiling)) ? opt.ceiling : x;
    }

    FidelityCurve out;
    out.kind = CurveKind::smoothed;
    out.times.assign(at.begin(), at.end());
    out.values.reserve(at.size());
    const double t0 = curve.times.front();
    const double reach = opt.cutoff * sigma;
    const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
    for (double t : at) {
        const double lo_f = std::ceil((t - reach - t0) / h);
        const double hi_f = std::floor((t + reach - t0) / h);
        const double lo_d = std::max(0.0, lo_f);
        const double hi_d = std::min(static_cast<double>(n - 1), hi_f);
        double num = 0.0;
        double den = 0.0;
        for (auto i = static_cast<std::size_t>(lo_d); hi_d >= lo_d && i <= static_cast<std::size_t>(hi_d); ++i) {
            const double d = curve.times[i] - t;
            const double w = std::exp(-d * d * inv_two_var);
            num += w * v[i];
            den += w;
        }
        out.values.push_back(den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

inline FidelityCurve smooth_curve(const FidelityCurve& curve, double sigma, const SmoothingOptions& opt = {}) {
    return smooth_at(curve, sigma, curve.times, opt);
}

inline std::vector<double> integer_times(int t_begin, int t_end) {
    std::vector<double> ts;
    for (int t = t_begin; t <= t_end; ++t) ts.push_back(t);
    return ts;
}

struct RefinementCheck {
    /// Largest |coarse - fine| over the output times.
    double max_change = 0;
    double tolerance = 2e-3;
};

/// Smoothed analytic law at integer kicks t_begin..t_end. The law is sampled
/// (a kernel reach beyond both ends) at `per_kick` and `per_kick / 2` points per kick; if the two smoothed curves
/// differ by more than the tolerance, NonIntegrable is thrown.
template <class Law>
FidelityCurve smooth_analytic(Law&& law, int t_begin, int t_end, double sigma, int per_kick = default_subsamples,
                              const SmoothingOptions& opt = {}, RefinementCheck* check = nullptr) {
    if (per_kick < 2 || per_kick % 2 != 0) throw std::invalid_argument("per_kick must be even and >= 2");
    const auto at = integer_times(t_begin, t_end);
    // Sample past both ends so the kernel is only truncated at t = 0.
    const double reach = std::ceil(opt.cutoff * sigma);
    const double lo = std::max(0.0, t_begin - reach);
    const double hi = t_end + reach;
    const FidelityCurve fine = smooth_at(sample_analytic(law, lo, hi, per_kick, CurveKind::smoothed), sigma, at, opt);
    const FidelityCurve coarse =
        smooth_at(sample_analytic(law, lo, hi, per_kick / 2, CurveKind::smoothed), sigma, at, opt);
    RefinementCheck local;
    RefinementCheck& rc = check ? *check : local;
    rc.max_change = 0.0;
    for (std::size_t i = 0; i < at.size(); ++i)
        rc.max_change = std::max(rc.max_change, std::abs(fine.values[i] - coarse.values[i]));
    if (!(rc.max_change <= rc.tolerance))
        throw NonIntegrable("smoothed curve changed by " + std::to_string(rc.max_change) +
                            " under sub-kick refinement");
    return fine;
}

} // namespace rotorlab
