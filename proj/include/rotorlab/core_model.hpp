#pragma once

// Parameters, rotor states, quasi-momentum ensembles and fidelity curves.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rotorlab {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Truncation defaults for the momentum basis.
inline constexpr int default_n_max = 128;
inline constexpr int default_n_guard = 16;
inline constexpr double default_tail_tol = 1e-12;

/// Reduce a quasi-momentum into the Brillouin zone [0, 1).
inline double reduce_beta(double beta) {
    double r = beta - std::floor(beta);
    return r >= 1.0 ? 0.0 : r;
}

/// Scalars derived from a RotorParams. `beating_period` is absent when the two
/// libration frequencies coincide.
struct DerivedQuantities {
    double ktilde1 = 0;
    double ktilde2 = 0;
    double beta_bar = 0;
    double omega1 = 0;
    double omega2 = 0;
    double omega_plus = 0;
    double omega_minus = 0;
    double delta_k = 0;
    std::optional<double> beating_period;

    bool degenerate_beating() const { return !beating_period.has_value(); }
};

/// Kicked-rotor parameters near the resonance tau = 2*pi*ell.
///
/// Exactly one of {tau, epsilon} is supplied; the other is derived so that
/// tau - 2*pi*ell - epsilon vanishes to rounding. The detuning may have either
/// sign; the effective kick strength uses |epsilon|.
class RotorParams {
public:
    static RotorParams from_detuning(double epsilon, int ell, double k1, double k2, double beta) {
        return RotorParams(two_pi * ell + epsilon, epsilon, ell, k1, k2, beta);
    }

    static RotorParams from_period(double tau, int ell, double k1, double k2, double beta) {
        return RotorParams(tau, tau - two_pi * ell, ell, k1, k2, beta);
    }

    double tau() const { return tau_; }
    double epsilon() const { return epsilon_; }
    int ell() const { return ell_; }
    double k1() const { return k1_; }
    double k2() const { return k2_; }
    double beta() const { return beta_; }

    double ktilde1() const { return std::abs(epsilon_) * k1_; }
    double ktilde2() const { return std::abs(epsilon_) * k2_; }
    double beta_bar() const { return tau_ * (beta_ - 0.5); }
    double omega1() const { return std::sqrt(ktilde1()); }
    double omega2() const { return std::sqrt(ktilde2()); }
    double delta_k() const { return k2_ - k1_; }

    /// Copy at another quasi-momentum (reduced into [0, 1)).
    RotorParams with_beta(double beta) const {
        return RotorParams(tau_, epsilon_, ell_, k1_, k2_, reduce_beta(beta));
    }

    RotorParams with_kicks(double k1, double k2) const {
        return RotorParams(tau_, epsilon_, ell_, k1, k2, beta_);
    }

    RotorParams swapped() const { return with_kicks(k2_, k1_); }

private:
    RotorParams(double tau, double epsilon, int ell, double k1, double k2, double beta)
        : tau_(tau), epsilon_(epsilon), ell_(ell), k1_(k1), k2_(k2), beta_(beta) {
        if (ell < 1) throw std::invalid_argument("ell must be a positive integer");
        if (!std::isfinite(tau) || !std::isfinite(epsilon))
            throw std::invalid_argument("tau/epsilon must be finite");
        if (!(k1 >= 0.0) || !(k2 >= 0.0) || !std::isfinite(k1) || !std::isfinite(k2))
            throw std::invalid_argument("kick strengths must be finite and >= 0");
        if (!(beta >= 0.0 && beta < 1.0))
            throw std::invalid_argument("beta must lie in [0, 1)");
    }

    double tau_;
    double epsilon_;
    int ell_;
    double k1_;
    double k2_;
    double beta_;
};

inline DerivedQuantities derived_quantities(const RotorParams& p) {
    DerivedQuantities d;
    d.ktilde1 = p.ktilde1();
    d.ktilde2 = p.ktilde2();
    d.beta_bar = p.beta_bar();
    d.omega1 = p.omega1();
    d.omega2 = p.omega2();
    d.omega_plus = d.omega1 + d.omega2;
    d.omega_minus = d.omega1 - d.omega2;
    d.delta_k = p.delta_k();
    if (d.omega_minus != 0.0) d.beating_period = two_pi / std::abs(d.omega_minus);
    return d;
}

/// Amplitudes over the momentum basis n = -n_max..n_max.
class RotorState {
public:
    RotorState(int n_max, std::vector<cplx> amplitudes)
        : n_max_(n_max), amplitudes_(std::move(amplitudes)) {
        if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
        if (amplitudes_.size() != basis_size(n_max))
            throw std::invalid_argument("amplitude vector length must be 2*n_max+1");
    }

    static std::size_t basis_size(int n_max) { return static_cast<std::size_t>(2 * n_max + 1); }

    int n_max() const { return n_max_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const cplx> amplitudes() const { return amplitudes_; }

    cplx amplitude(int n) const { return amplitudes_.at(static_cast<std::size_t>(n + n_max_)); }
    double population(int n) const { return std::norm(amplitude(n)); }

    double norm_squared() const {
        double s = 0.0;
        for (const cplx& a : amplitudes_) s += std::norm(a);
        return s;
    }

    /// Population in |n| >= n_max - n_guard.
    double tail_population(int n_guard = default_n_guard) const;

private:
    int n_max_;
    std::vector<cplx> amplitudes_;
};

namespace detail {

inline double tail_population(std::span<const cplx> amps, int n_max, int n_guard) {
    const int edge = std::max(n_max - n_guard, 0);
    double s = 0.0;
    for (int n = -n_max; n <= n_max; ++n)
        if (std::abs(n) >= edge) s += std::norm(amps[static_cast<std::size_t>(n + n_max)]);
    return s;
}

} // namespace detail

inline double RotorState::tail_population(int n_guard) const {
    return detail::tail_population(amplitudes_, n_max_, n_guard);
}

/// Uniform angular wavefunction: the pure n = 0 momentum state.
inline RotorState initial_state(int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<cplx> amps(RotorState::basis_size(n_max), cplx{0.0, 0.0});
    amps[static_cast<std::size_t>(n_max)] = 1.0;
    return RotorState(n_max, std::move(amps));
}

/// Equidistant quasi-momenta in the half-open interval [center - b, center + b),
/// equally weighted. Members are not reduced mod 1 here.
class QuasiMomentumEnsemble {
public:
    QuasiMomentumEnsemble(double center, double halfwidth, int count)
        : center_(center), halfwidth_(halfwidth) {
        if (!(center >= 0.0 && center < 1.0)) throw std::invalid_argument("center must lie in [0, 1)");
        if (!(halfwidth >= 0.0 && halfwidth <= 0.5))
            throw std::invalid_argument("halfwidth must lie in [0, 1/2]");
        if (count < 1) throw std::invalid_argument("ensemble count must be >= 1");
        members_.reserve(static_cast<std::size_t>(count));
        const double lo = center - halfwidth;
        const double step = 2.0 * halfwidth / count;
        for (int j = 0; j < count; ++j) members_.push_back(lo + step * j);
    }

    double center() const { return center_; }
    double halfwidth() const { return halfwidth_; }
    int count() const { return static_cast<int>(members_.size()); }
    std::span<const double> members() const { return members_; }

private:
    double center_;
    double halfwidth_;
    std::vector<double> members_;
};

enum class CurveKind {
    numeric,
    analytic_exact_resonance,
    analytic_pseudoclassical,
    analytic_harmonic_ensemble,
    analytic_harmonic_resonant,
    smoothed,
};

inline std::string_view to_string(CurveKind k) {
    switch (k) {
    case CurveKind::numeric: return "numeric";
    case CurveKind::analytic_exact_resonance: return "analytic_exact_resonance";
    case CurveKind::analytic_pseudoclassical: return "analytic_pseudoclassical";
    case CurveKind::analytic_harmonic_ensemble: return "analytic_harmonic_ensemble";
    case CurveKind::analytic_harmonic_resonant: return "analytic_harmonic_resonant";
    case CurveKind::smoothed: return "smoothed";
    }
    return "unknown";
}

/// Time series of fidelity values. Times are kick counts; analytic curves may
/// be sampled between kicks, and their singular samples are flagged.
struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> values;
    CurveKind kind = CurveKind::numeric;
    std::vector<std::uint8_t> singular; // empty, or one flag per sample

    std::size_t size() const { return times.size(); }

    bool is_singular(std::size_t i) const { return !singular.empty() && singular[i] != 0; }

    /// Throws std::logic_error if the structural invariants do not hold.
    void validate() const {
        if (values.size() != times.size()) throw std::logic_error("curve: times/values length mismatch");
        if (!singular.empty() && singular.size() != times.size())
            throw std::logic_error("curve: singular mask length mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1])) throw std::logic_error("curve: times not strictly increasing");
        if (kind == CurveKind::numeric)
            for (double v : values)
                if (!(v >= 0.0 && v <= 1.0 + 1e-9)) throw std::logic_error("curve: numeric value outside [0, 1]");
    }

    /// Value at an exact sample time; throws if the time is not on the grid.
    double at(double t) const {
        auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9);
        if (it == times.end() || std::abs(*it - t) > 1e-9) throw std::out_of_range("curve: time not sampled");
        return values[static_cast<std::size_t>(it - times.begin())];
    }
};

} // namespace rotorlab
