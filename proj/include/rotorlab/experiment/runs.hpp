#pragma once

// The numerical experiments behind the CLI subcommands. Each run returns its
// table and metadata; write_result puts them on disk.

#include "rotorlab/analytic.hpp"
#include "rotorlab/core_model.hpp"
#include "rotorlab/experiment/config.hpp"
#include "rotorlab/experiment/output.hpp"
#include "rotorlab/fidelity.hpp"
#include "rotorlab/peaks.hpp"
#include "rotorlab/pseudoclassical_map.hpp"
#include "rotorlab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace rotorlab::experiment {

struct RunResult {
    std::string name; // file stem
    Table table;
    Metadata meta;
    std::vector<std::string> warnings;
};

namespace detail {

inline EvolutionOptions evolution_options(const RunConfig& c) {
    EvolutionOptions o;
    o.n_max = c.n_max;
    o.threads = c.threads;
    return o;
}

inline std::string file_stem(Experiment e) {
    std::string s(to_string(e));
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

inline void describe_params(Metadata& m, const RunConfig& c, const RotorParams& p) {
    m.set("experiment", std::string(to_string(c.experiment)));
    m.set("tau", p.tau());
    m.set("epsilon", p.epsilon());
    m.set("ell", p.ell());
    m.set("k1", p.k1());
    m.set("k2", p.k2());
    m.set("beta", p.beta());
    m.set("t_max", c.t_max);
    m.set("n_max_requested", c.n_max);
    m.set("sigma_smooth", c.sigma_smooth);

    const DerivedQuantities d = derived_quantities(p);
    m.set("ktilde1", d.ktilde1);
    m.set("ktilde2", d.ktilde2);
    m.set("beta_bar", d.beta_bar);
    m.set("omega1", d.omega1);
    m.set("omega2", d.omega2);
    m.set("omega_plus", d.omega_plus);
    m.set("omega_minus", d.omega_minus);
    m.set("delta_k", d.delta_k);
    if (d.beating_period) {
        m.set("T12", *d.beating_period);
        m.set("T12_half", *d.beating_period / 2.0);
    } else {
        m.set("T12", "none (degenerate beating)");
        m.set("T12_half", "none (degenerate beating)");
    }

    if (p.epsilon() != 0.0) {
        for (Kick which : {Kick::first, Kick::second}) {
            const std::string tag = which == Kick::first ? "_k1" : "_k2";
            const MapParams mp = map_params(p, which);
            if (mp.ktilde > 0.0) {
                const IslandGeometry g = central_island(p, which);
                m.set("island_center_action" + tag, g.center_action);
                m.set("island_halfwidth_action" + tag, g.halfwidth_action);
                m.set("island_halfwidth_beta" + tag, g.halfwidth_beta);
                m.set("libration_frequency" + tag, g.libration_frequency_center);
                m.set("min_half_period" + tag, g.min_half_period);
            } else {
                m.set("island_halfwidth_action" + tag, "none (ktilde = 0)");
                m.set("island_halfwidth_beta" + tag, "none (ktilde = 0)");
            }
        }
    } else {
        m.set("island_halfwidth_action_k1", "none (exact resonance)");
        m.set("island_halfwidth_action_k2", "none (exact resonance)");
    }
}

inline void describe_ensemble(Metadata& m, const QuasiMomentumEnsemble& e) {
    m.set("ensemble_center", e.center());
    m.set("ensemble_halfwidth", e.halfwidth());
    m.set("ensemble_count", e.count());
}

inline void record_warnings(RunResult& r) {
    std::string joined;
    for (const auto& w : r.warnings) joined += (joined.empty() ? "" : "; ") + w;
    r.meta.set("warnings", joined.empty() ? std::string("none") : joined);
}

} // namespace detail

/// Resonant rotor: numeric fidelity against the resonant harmonic law, raw and smoothed.
inline RunResult run_figure1(const RunConfig& c) {
    validate(c);
    const RotorParams p = c.params();
    RunResult r;
    r.name = detail::file_stem(c.experiment);

    const OverlapSeries series = rotor_overlap_series(p, c.t_max, detail::evolution_options(c));
    const FidelityCurve numeric = rotor_fidelity(series);
    const auto law = [&](double t) { return harmonic_resonant_fidelity(p, t); };
    RefinementCheck check;
    const FidelityCurve smoothed = smooth_analytic(law, 1, c.t_max, c.sigma_smooth, default_subsamples, {}, &check);

    r.table.header = {"t", "F_numeric", "F_eq11_raw", "F_eq11_smoothed"};
    for (int t = 1; t <= c.t_max; ++t) {
        const auto i = static_cast<std::size_t>(t);
        r.table.add_row({static_cast<double>(t), numeric.values[i], law(t).value,
                         smoothed.values[i - 1]});
    }
    detail::describe_params(r.meta, c, p);
    r.meta.set("n_max_used", series.n_max_used);
    r.meta.set("smoothing_refinement_change", check.max_change);
    detail::record_warnings(r);
    return r;
}

/// Beta ensemble: atom fidelity, plus the ensemble harmonic law for figure2a.
inline RunResult run_figure2(const RunConfig& c) {
    validate(c);
    const RotorParams p = c.params();
    const QuasiMomentumEnsemble ensemble(c.ensemble_center, c.ensemble_halfwidth, c.ensemble_count);
    RunResult r;
    r.name = detail::file_stem(c.experiment);
    const bool with_theory = c.experiment == Experiment::figure2a;

    if (with_theory) r.warnings = check_ensemble_width(p, c.ensemble_halfwidth);

    const EnsembleOverlap eo = ensemble_overlap(ensemble, p, c.t_max, detail::evolution_options(c));
    const FidelityCurve numeric = atom_fidelity(eo);

    if (with_theory) {
        const double b = c.ensemble_halfwidth;
        const auto law = [&](double t) { return harmonic_ensemble_fidelity(p, b, t); };
        RefinementCheck check;
        const FidelityCurve smoothed =
            smooth_analytic(law, 1, c.t_max, c.sigma_smooth, default_subsamples, {}, &check);
        r.table.header = {"t", "F_numeric_ensemble", "F_eq10_raw", "F_eq10_smoothed"};
        for (int t = 1; t <= c.t_max; ++t) {
            const auto i = static_cast<std::size_t>(t);
            r.table.add_row({static_cast<double>(t), numeric.values[i], law(t).value, smoothed.values[i - 1]});
        }
        r.meta.set("smoothing_refinement_change", check.max_change);
    } else {
        r.table.header = {"t", "F_numeric_ensemble"};
        for (int t = 1; t <= c.t_max; ++t)
            r.table.add_row({static_cast<double>(t), numeric.values[static_cast<std::size_t>(t)]});
    }
    detail::describe_params(r.meta, c, p);
    detail::describe_ensemble(r.meta, ensemble);
    r.meta.set("n_max_used", eo.n_max_used);
    detail::record_warnings(r);
    return r;
}

/// tau = 2 pi ell: numeric rotor fidelity against the Bessel law.
inline RunResult run_exact_resonance(const RunConfig& c) {
    validate(c);
    const RotorParams p = c.params();
    RunResult r;
    r.name = detail::file_stem(c.experiment);
    const OverlapSeries series = rotor_overlap_series(p, c.t_max, detail::evolution_options(c));
    const FidelityCurve numeric = rotor_fidelity(series);

    r.table.header = {"t", "F_numeric", "F_eq4"};
    double max_diff = 0.0;
    for (int t = 1; t <= c.t_max; ++t) {
        const double fn = numeric.values[static_cast<std::size_t>(t)];
        const double fa = exact_resonance_fidelity(p, t);
        max_diff = std::max(max_diff, std::abs(fn - fa));
        r.table.add_row({static_cast<double>(t), fn, fa});
    }
    detail::describe_params(r.meta, c, p);
    r.meta.set("n_max_used", series.n_max_used);
    r.meta.set("max_abs_difference", max_diff);
    detail::record_warnings(r);
    return r;
}

/// Orbits of the epsilon-classical map launched along theta = pi across the
/// central island (or a unit action band when there is no island).
inline RunResult run_map_portrait(const RunConfig& c) {
    validate(c);
    const RotorParams p = c.params();
    const MapParams mp = map_params(p, Kick::first);
    RunResult r;
    r.name = detail::file_stem(c.experiment);

    const int island = nearest_island(mp, 0.0);
    const double center = island_center_action(mp, island);
    const double span = mp.ktilde > 0.0 ? 1.5 * island_geometry(mp, island).halfwidth_action : 0.5;

    r.table.header = {"orbit", "step", "theta", "action", "motion"};
    for (int o = 0; o < c.portrait_orbits; ++o) {
        const double frac = (o + 0.5) / c.portrait_orbits;
        const MapState s0{pi, center - span + 2.0 * span * frac};
        const double motion = static_cast<double>(classify_motion(s0, mp));
        const MapOrbit orbit = iterate_orbit(s0, mp, c.t_max);
        for (std::size_t i = 0; i < orbit.size(); ++i)
            r.table.add_row({static_cast<double>(o), static_cast<double>(i), orbit[i].theta, orbit[i].action, motion});
    }
    detail::describe_params(r.meta, c, p);
    r.meta.set("n_max_used", "n/a (classical map)");
    r.meta.set("portrait_orbits", c.portrait_orbits);
    r.meta.set("portrait_island_index", island);
    r.meta.set("portrait_action_span", span);
    r.meta.set("motion_codes", "0 = librational, 1 = rotational, 2 = near_separatrix");
    detail::record_warnings(r);
    return r;
}

/// Revival time against detuning: for each epsilon, the smoothed numeric
/// fidelity of the rotor at `beta` is searched for its largest value within a
/// quarter beating period of T12/2.
inline RunResult run_sweep(const RunConfig& c) {
    validate(c);
    RunResult r;
    r.name = detail::file_stem(c.experiment);
    r.table.header = {"epsilon", "T12", "T12_half", "peak_t", "peak_F_smoothed", "n_max_used"};
    int n_used = 0;
    for (double eps : c.sweep_epsilons) {
        RunConfig ci = c;
        ci.epsilon = eps;
        ci.tau.reset();
        const RotorParams p = ci.params();
        const double t12 = *derived_quantities(p).beating_period;
        const double half = 0.5 * t12;
        const int t_run = static_cast<int>(std::ceil(half + 0.25 * t12 + 4.0 * c.sigma_smooth));
        const OverlapSeries series = rotor_overlap_series(p, t_run, detail::evolution_options(c));
        FidelityCurve numeric = rotor_fidelity(series);
        const FidelityCurve smoothed = smooth_curve(numeric, c.sigma_smooth);
        const Peak peak = window_max(smoothed, half - 0.25 * t12, half + 0.25 * t12);
        r.table.add_row({eps, t12, half, peak.time, peak.value, static_cast<double>(series.n_max_used)});
        n_used = std::max(n_used, series.n_max_used);
    }
    detail::describe_params(r.meta, c, c.params());
    std::string eps_list;
    for (double e : c.sweep_epsilons) eps_list += (eps_list.empty() ? "" : ", ") + format_real(e);
    r.meta.set("sweep_epsilons", eps_list);
    r.meta.set("n_max_used", n_used);
    detail::record_warnings(r);
    return r;
}

inline RunResult run(const RunConfig& c) {
    switch (c.experiment) {
    case Experiment::figure1: return run_figure1(c);
    case Experiment::figure2a:
    case Experiment::figure2b: return run_figure2(c);
    case Experiment::exact_resonance: return run_exact_resonance(c);
    case Experiment::map_portrait: return run_map_portrait(c);
    case Experiment::sweep: return run_sweep(c);
    }
    throw std::logic_error("unhandled experiment");
}

/// Writes <dir>/<name>.csv and <dir>/<name>.meta; returns the CSV path.
inline std::filesystem::path write_result(const RunResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto csv = dir / (r.name + ".csv");
    write_csv(csv, r.table);
    write_meta(dir / (r.name + ".meta"), r.meta);
    return csv;
}

} // namespace rotorlab::experiment
