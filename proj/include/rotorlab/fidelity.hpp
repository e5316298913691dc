#pragma once

// Rotor overlaps and atom fidelity.
//
// The atom fidelity averages the complex rotor overlaps over quasi-momentum
// first and squares the modulus afterwards; it is not the mean of the rotor
// fidelities.

#include "rotorlab/core_model.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/fft.hpp"
#include "rotorlab/propagator.hpp"
#include "rotorlab/summation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace rotorlab {

struct EvolutionOptions {
    int n_max = default_n_max;
    /// Basis doubling stops here; beyond it UnderResolved propagates.
    int n_max_limit = 4096;
    int n_guard = default_n_guard;
    double tail_tol = default_tail_tol;
    /// Worker threads for ensembles; 0 picks the hardware concurrency.
    int threads = 0;
};

struct OverlapSeries {
    double beta = 0;
    std::vector<int> times;     // 0..t_max
    std::vector<cplx> overlaps; // <U1^t psi | U2^t psi>
    int n_max_used = 0;
};

namespace detail {

/// Per-thread evolution context: caches kick tables and FFT scratch per grid size.
class OverlapWorker {
public:
    OverlapWorker(double k1, double k2, const EvolutionOptions& opt) : k1_(k1), k2_(k2), opt_(opt) {}

    /// Fills `out[0..t_max]` and returns the basis size that resolved the run.
    int run(const RotorParams& params, int t_max, std::span<cplx> out) {
        int n_max = opt_.n_max;
        for (;;) {
            try {
                compute(params, n_max, t_max, out);
                return n_max;
            } catch (const UnderResolved&) {
                if (2 * n_max > opt_.n_max_limit) throw;
                n_max *= 2;
            }
        }
    }

private:
    struct GridCache {
        PhaseTable kick1;
        PhaseTable kick2;
        FftWorkspace fft;
    };

    GridCache& grid(std::size_t g) {
        auto it = cache_.find(g);
        if (it == cache_.end()) {
            auto k1 = make_kick_phases(k1_, g);
            auto k2 = k2_ == k1_ ? k1 : make_kick_phases(k2_, g);
            it = cache_.emplace(g, GridCache{std::move(k1), std::move(k2), FftWorkspace(g)}).first;
        }
        return it->second;
    }

    void compute(const RotorParams& params, int n_max, int t_max, std::span<cplx> out) {
        auto& cache = grid(default_grid_size(n_max));
        // One kinetic table for both evolutions: their free phases cancel exactly.
        auto kinetic = make_kinetic_phases(params, n_max);
        const PropagatorPlan plan1 = PropagatorPlan(params, k1_, n_max, kinetic, cache.kick1)
                                         .with_resolution(opt_.n_guard, opt_.tail_tol);
        const PropagatorPlan plan2 = PropagatorPlan(params, k2_, n_max, kinetic, cache.kick2)
                                         .with_resolution(opt_.n_guard, opt_.tail_tol);

        const auto psi0 = initial_state(n_max).amplitudes();
        a_.assign(psi0.begin(), psi0.end());
        b_.assign(psi0.begin(), psi0.end());
        out[0] = cplx{1.0, 0.0};
        for (int t = 1; t <= t_max; ++t) {
            apply_floquet_inplace(a_, plan1, cache.fft);
            apply_floquet_inplace(b_, plan2, cache.fft);
            cplx s{0.0, 0.0};
            for (std::size_t i = 0; i < a_.size(); ++i) s += std::conj(a_[i]) * b_[i];
            out[static_cast<std::size_t>(t)] = s;
        }
    }

    double k1_;
    double k2_;
    EvolutionOptions opt_;
    std::map<std::size_t, GridCache> cache_;
    std::vector<cplx> a_;
    std::vector<cplx> b_;
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace detail

/// Overlap of the k1- and k2-evolved initial state at t = 0..t_max. The basis
/// is doubled from `opt.n_max` until the guard band stays empty.
inline OverlapSeries rotor_overlap_series(const RotorParams& params, int t_max,
                                          const EvolutionOptions& opt = {}) {
    if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
    OverlapSeries s;
    s.beta = params.beta();
    s.overlaps.resize(static_cast<std::size_t>(t_max) + 1);
    detail::OverlapWorker worker(params.k1(), params.k2(), opt);
    s.n_max_used = worker.run(params, t_max, s.overlaps);
    s.times.resize(s.overlaps.size());
    for (std::size_t t = 0; t < s.times.size(); ++t) s.times[t] = static_cast<int>(t);
    return s;
}

inline FidelityCurve rotor_fidelity(const OverlapSeries& series) {
    FidelityCurve c;
    c.kind = CurveKind::numeric;
    c.times.assign(series.times.begin(), series.times.end());
    c.values.reserve(series.overlaps.size());
    for (const cplx& z : series.overlaps) c.values.push_back(std::norm(z));
    return c;
}

struct EnsembleOverlap {
    std::vector<cplx> mean_overlap; // t = 0..t_max
    int n_max_used = 0;             // largest basis any member needed
    int members = 0;
};

/// Uniformly weighted mean of the member overlaps at every t. Members run in
/// parallel; the reduction order is fixed, so the result does not depend on the
/// thread count.
inline EnsembleOverlap ensemble_overlap(const QuasiMomentumEnsemble& ensemble, const RotorParams& params_template,
                                        int t_max, const EvolutionOptions& opt = {}) {
    if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
    const auto betas = ensemble.members();
    const std::size_t m = betas.size();
    const std::size_t rows = static_cast<std::size_t>(t_max) + 1;

    // Row t holds every member's overlap at time t.
    std::vector<cplx> table(rows * m);
    std::vector<int> used(m, 0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        detail::OverlapWorker worker(params_template.k1(), params_template.k2(), opt);
        std::vector<cplx> series(rows);
        for (std::size_t j = next++; j < m; j = next++) {
            try {
                used[j] = worker.run(params_template.with_beta(betas[j]), t_max, series);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = m;
                return;
            }
            for (std::size_t t = 0; t < rows; ++t) table[t * m + j] = series[t];
        }
    };

    const int n_threads = std::min<int>(detail::resolve_threads(opt.threads), static_cast<int>(m));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    EnsembleOverlap out;
    out.members = static_cast<int>(m);
    out.n_max_used = *std::max_element(used.begin(), used.end());
    out.mean_overlap.resize(rows);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t t = 0; t < rows; ++t)
        out.mean_overlap[t] = pairwise_sum<cplx>(std::span<const cplx>(table).subspan(t * m, m)) * inv_m;
    out.mean_overlap[0] = cplx{1.0, 0.0};
    return out;
}

inline FidelityCurve atom_fidelity(const EnsembleOverlap& e) {
    FidelityCurve c;
    c.kind = CurveKind::numeric;
    c.times.reserve(e.mean_overlap.size());
    c.values.reserve(e.mean_overlap.size());
    for (std::size_t t = 0; t < e.mean_overlap.size(); ++t) {
        c.times.push_back(static_cast<double>(t));
        c.values.push_back(std::norm(e.mean_overlap[t]));
    }
    return c;
}

inline FidelityCurve atom_fidelity(const QuasiMomentumEnsemble& ensemble, const RotorParams& params_template,
                                   int t_max, const EvolutionOptions& opt = {}) {
    return atom_fidelity(ensemble_overlap(ensemble, params_template, t_max, opt));
}

} // namespace rotorlab
