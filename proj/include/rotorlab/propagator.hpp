#pragma once

// One-kick Floquet propagation of a rotor at fixed quasi-momentum.
//
// The free evolution is diagonal in momentum, the kick is diagonal in angle.
// Each kick multiplies by the kinetic phases, transforms to an angle grid,
// multiplies by the kick phases and transforms back, keeping |n| <= n_max.

#include "rotorlab/core_model.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/fft.hpp"

#include <bit>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace rotorlab {

using PhaseTable = std::shared_ptr<const std::vector<cplx>>;

/// Smallest power of two >= 2 * (2 n_max + 1).
inline std::size_t default_grid_size(int n_max) {
    return std::bit_ceil(2 * RotorState::basis_size(n_max));
}

/// exp(-i tau (n + beta)^2 / 2) for n = -n_max..n_max.
inline PhaseTable make_kinetic_phases(const RotorParams& p, int n_max) {
    auto table = std::make_shared<std::vector<cplx>>();
    table->reserve(RotorState::basis_size(n_max));
    const double tau = p.tau();
    const double beta = p.beta();
    for (int n = -n_max; n <= n_max; ++n) {
        const double q = n + beta;
        table->push_back(std::polar(1.0, -0.5 * tau * q * q));
    }
    return table;
}

/// exp(-i k cos(theta_j)) on theta_j = 2 pi j / grid_size.
inline PhaseTable make_kick_phases(double k, std::size_t grid_size) {
    auto table = std::make_shared<std::vector<cplx>>();
    table->reserve(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double theta = two_pi * static_cast<double>(j) / static_cast<double>(grid_size);
        table->push_back(std::polar(1.0, -k * std::cos(theta)));
    }
    return table;
}

/// Precomputed phase tables for one (beta, k) evolution. Immutable and
/// shareable; the tables themselves may be shared between plans.
class PropagatorPlan {
public:
    PropagatorPlan(const RotorParams& params, double k, int n_max, std::size_t grid_size = 0)
        : PropagatorPlan(params, k, n_max, make_kinetic_phases(params, n_max),
                         make_kick_phases(k, grid_size ? grid_size : default_grid_size(n_max))) {}

    PropagatorPlan(const RotorParams& params, double k, int n_max, PhaseTable kinetic, PhaseTable kick)
        : params_(params), k_(k), n_max_(n_max), kinetic_(std::move(kinetic)), kick_(std::move(kick)) {
        if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
        if (!kinetic_ || kinetic_->size() != RotorState::basis_size(n_max))
            throw std::invalid_argument("kinetic phase table does not match n_max");
        if (!kick_ || kick_->size() < RotorState::basis_size(n_max))
            throw std::invalid_argument("angle grid must have at least 2*n_max+1 points");
    }

    const RotorParams& params() const { return params_; }
    double k() const { return k_; }
    int n_max() const { return n_max_; }
    std::size_t grid_size() const { return kick_->size(); }
    std::span<const cplx> kinetic_phases() const { return *kinetic_; }
    std::span<const cplx> kick_phases() const { return *kick_; }
    const PhaseTable& kinetic_table() const { return kinetic_; }
    const PhaseTable& kick_table() const { return kick_; }

    int n_guard() const { return n_guard_; }
    double tail_tol() const { return tail_tol_; }

    PropagatorPlan with_resolution(int n_guard, double tail_tol) const {
        PropagatorPlan p = *this;
        p.n_guard_ = n_guard;
        p.tail_tol_ = tail_tol;
        return p;
    }

private:
    RotorParams params_;
    double k_;
    int n_max_;
    PhaseTable kinetic_;
    PhaseTable kick_;
    int n_guard_ = default_n_guard;
    double tail_tol_ = default_tail_tol;
};

/// Apply one Floquet period in place. Returns the guard-band population.
/// Throws UnderResolved when it exceeds the plan's tail tolerance.
inline double apply_floquet_inplace(std::span<cplx> amps, const PropagatorPlan& plan, FftWorkspace& scratch) {
    const int n_max = plan.n_max();
    const std::size_t g = plan.grid_size();
    if (amps.size() != RotorState::basis_size(n_max)) throw std::invalid_argument("state/plan n_max mismatch");
    if (scratch.size() != g) throw std::invalid_argument("scratch size does not match plan grid");

    const auto kin = plan.kinetic_phases();
    const auto kick = plan.kick_phases();
    auto buf = scratch.buffer();
    std::fill(buf.begin(), buf.end(), cplx{0.0, 0.0});

    const auto slot = [g](int n) {
        return n >= 0 ? static_cast<std::size_t>(n) : g - static_cast<std::size_t>(-n);
    };

    for (int n = -n_max; n <= n_max; ++n) {
        const auto i = static_cast<std::size_t>(n + n_max);
        buf[slot(n)] = amps[i] * kin[i];
    }
    scratch.backward();
    for (std::size_t j = 0; j < g; ++j) buf[j] *= kick[j];
    scratch.forward();
    const double inv_g = 1.0 / static_cast<double>(g);
    for (int n = -n_max; n <= n_max; ++n) amps[static_cast<std::size_t>(n + n_max)] = buf[slot(n)] * inv_g;

    const double tail = detail::tail_population(amps, n_max, plan.n_guard());
    if (tail > plan.tail_tol()) throw UnderResolved(n_max, tail);
    return tail;
}

inline RotorState apply_floquet(const RotorState& state, const PropagatorPlan& plan, FftWorkspace& scratch) {
    if (state.n_max() != plan.n_max()) throw std::invalid_argument("state/plan n_max mismatch");
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    apply_floquet_inplace(amps, plan, scratch);
    return RotorState(state.n_max(), std::move(amps));
}

inline RotorState apply_floquet(const RotorState& state, const PropagatorPlan& plan) {
    FftWorkspace scratch(plan.grid_size());
    return apply_floquet(state, plan, scratch);
}

/// States after 1..t kicks.
inline std::vector<RotorState> evolve(const RotorState& state, const PropagatorPlan& plan, int t) {
    if (t < 0) throw std::invalid_argument("t must be >= 0");
    if (state.n_max() != plan.n_max()) throw std::invalid_argument("state/plan n_max mismatch");
    FftWorkspace scratch(plan.grid_size());
    std::vector<RotorState> out;
    out.reserve(static_cast<std::size_t>(t));
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    for (int step = 0; step < t; ++step) {
        apply_floquet_inplace(amps, plan, scratch);
        out.emplace_back(state.n_max(), amps);
    }
    return out;
}

} // namespace rotorlab
