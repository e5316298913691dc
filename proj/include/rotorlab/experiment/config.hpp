#pragma once

// Run configuration: defaults per experiment, a flat `key = value` file
// format, and validation that names the failing field.

#include "rotorlab/core_model.hpp"
#include "rotorlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace rotorlab::experiment {

enum class Experiment { figure1, figure2a, figure2b, exact_resonance, sweep, map_portrait };

inline std::string_view to_string(Experiment e) {
    switch (e) {
    case Experiment::figure1: return "figure1";
    case Experiment::figure2a: return "figure2a";
    case Experiment::figure2b: return "figure2b";
    case Experiment::exact_resonance: return "exact-resonance";
    case Experiment::sweep: return "sweep";
    case Experiment::map_portrait: return "map-portrait";
    }
    return "unknown";
}

inline std::optional<Experiment> parse_experiment(std::string_view s) {
    for (Experiment e : {Experiment::figure1, Experiment::figure2a, Experiment::figure2b,
                         Experiment::exact_resonance, Experiment::sweep, Experiment::map_portrait}) {
        std::string name(to_string(e));
        std::string underscored = name;
        for (char& c : underscored)
            if (c == '-') c = '_';
        if (s == name || s == underscored) return e;
    }
    return std::nullopt;
}

struct RunConfig {
    Experiment experiment = Experiment::figure1;

    // Exactly one of tau / epsilon is set.
    std::optional<double> tau;
    std::optional<double> epsilon = 0.01;
    int ell = 1;
    double k1 = 0.8 * pi;
    double k2 = 0.6 * pi;
    double beta = 0.5;

    double ensemble_center = 0.5;
    double ensemble_halfwidth = 0.0;
    int ensemble_count = 1;

    int t_max = 650;
    int n_max = default_n_max;
    double sigma_smooth = 6.0;
    std::string output_path = ".";
    int threads = 0;

    int portrait_orbits = 21;
    std::vector<double> sweep_epsilons;

    RotorParams params() const {
        return tau ? RotorParams::from_period(*tau, ell, k1, k2, beta)
                   : RotorParams::from_detuning(epsilon.value_or(0.0), ell, k1, k2, beta);
    }

    double detuning() const { return tau ? *tau - two_pi * ell : epsilon.value_or(0.0); }
};

/// Defaults for each experiment.
inline RunConfig defaults_for(Experiment e) {
    RunConfig c;
    c.experiment = e;
    switch (e) {
    case Experiment::figure1: break;
    case Experiment::figure2a:
        c.ensemble_halfwidth = 0.025;
        c.ensemble_count = 5000;
        break;
    case Experiment::figure2b:
        c.ensemble_halfwidth = 0.5;
        c.ensemble_count = 5000;
        break;
    case Experiment::exact_resonance:
        c.epsilon = 0.0;
        c.t_max = 100;
        break;
    case Experiment::sweep: c.sweep_epsilons = {0.0025, 0.005, 0.01, 0.02}; break;
    case Experiment::map_portrait: c.t_max = 500; break;
    }
    return c;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Plain number, optionally scaled by pi: "0.8", "0.8pi", "0.8*pi", "pi".
inline double parse_real(std::string_view field, std::string_view text) {
    text = trim(text);
    double scale = 1.0;
    if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
        scale = pi;
        text = trim(text.substr(0, text.size() - 2));
        if (!text.empty() && text.back() == '*') text = trim(text.substr(0, text.size() - 1));
        if (text.empty()) return pi;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(std::string(field), "not a number: '" + std::string(text) + "'");
    return v * scale;
}

inline int parse_int(std::string_view field, std::string_view text) {
    text = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(std::string(field), "not an integer: '" + std::string(text) + "'");
    return v;
}

inline std::vector<double> parse_real_list(std::string_view field, std::string_view text) {
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_real(field, text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace detail

/// Apply `key = value` lines over `base`. Keys are case-sensitive; unknown
/// keys, duplicate keys and tau together with epsilon are errors.
inline RunConfig apply_config_text(RunConfig base, std::string_view text) {
    std::vector<std::string> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
        for (const auto& s : seen)
            if (s == key) throw ConfigError(key, "duplicate key");
        seen.push_back(key);

        if (key == "experiment") {
            const auto e = parse_experiment(value);
            if (!e) throw ConfigError(key, "unknown experiment '" + std::string(value) + "'");
            if (*e != base.experiment)
                throw ConfigError(key, "config is for '" + std::string(value) + "' but '" +
                                           std::string(to_string(base.experiment)) + "' was requested");
        } else if (key == "tau") {
            base.tau = detail::parse_real(key, value);
            base.epsilon.reset();
        } else if (key == "epsilon") {
            base.epsilon = detail::parse_real(key, value);
            base.tau.reset();
        } else if (key == "ell") {
            base.ell = detail::parse_int(key, value);
        } else if (key == "k1") {
            base.k1 = detail::parse_real(key, value);
        } else if (key == "k2") {
            base.k2 = detail::parse_real(key, value);
        } else if (key == "beta") {
            base.beta = detail::parse_real(key, value);
        } else if (key == "ensemble_center") {
            base.ensemble_center = detail::parse_real(key, value);
        } else if (key == "ensemble_halfwidth") {
            base.ensemble_halfwidth = detail::parse_real(key, value);
        } else if (key == "ensemble_count") {
            base.ensemble_count = detail::parse_int(key, value);
        } else if (key == "t_max") {
            base.t_max = detail::parse_int(key, value);
        } else if (key == "n_max") {
            base.n_max = detail::parse_int(key, value);
        } else if (key == "sigma_smooth") {
            base.sigma_smooth = detail::parse_real(key, value);
        } else if (key == "output_path") {
            base.output_path = std::string(value);
        } else if (key == "threads") {
            base.threads = detail::parse_int(key, value);
        } else if (key == "portrait_orbits") {
            base.portrait_orbits = detail::parse_int(key, value);
        } else if (key == "sweep_epsilons") {
            base.sweep_epsilons = detail::parse_real_list(key, value);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    bool has_tau = false, has_eps = false;
    for (const auto& s : seen) {
        has_tau |= s == "tau";
        has_eps |= s == "epsilon";
    }
    if (has_tau && has_eps) throw ConfigError("tau", "give only one of tau, epsilon");
    return base;
}

inline RunConfig load_config_file(RunConfig base, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return apply_config_text(std::move(base), ss.str());
}

/// Check every field against the preconditions of the modules the experiment uses.
inline void validate(const RunConfig& c) {
    if (c.ell < 1) throw ConfigError("ell", "must be >= 1");
    if (!(c.k1 >= 0.0)) throw ConfigError("k1", "must be >= 0");
    if (!(c.k2 >= 0.0)) throw ConfigError("k2", "must be >= 0");
    if (!(c.beta >= 0.0 && c.beta < 1.0)) throw ConfigError("beta", "must lie in [0, 1)");
    if (c.t_max < 1) throw ConfigError("t_max", "must be >= 1");
    if (c.n_max < 1) throw ConfigError("n_max", "must be >= 1");
    if (!(c.sigma_smooth > 0.0)) throw ConfigError("sigma_smooth", "must be > 0");
    if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
    if (!(c.ensemble_center >= 0.0 && c.ensemble_center < 1.0))
        throw ConfigError("ensemble_center", "must lie in [0, 1)");
    if (!(c.ensemble_halfwidth >= 0.0 && c.ensemble_halfwidth <= 0.5))
        throw ConfigError("ensemble_halfwidth", "must lie in [0, 1/2]");
    if (c.ensemble_count < 1) throw ConfigError("ensemble_count", "must be >= 1");
    if (c.portrait_orbits < 1) throw ConfigError("portrait_orbits", "must be >= 1");
    if (c.output_path.empty()) throw ConfigError("output_path", "must not be empty");

    const double eps = c.detuning();
    const char* eps_field = c.tau ? "tau" : "epsilon";
    switch (c.experiment) {
    case Experiment::exact_resonance:
        if (eps != 0.0) throw ConfigError(eps_field, "exact-resonance needs tau = 2*pi*ell (epsilon = 0)");
        break;
    case Experiment::figure1:
    case Experiment::figure2a:
    case Experiment::map_portrait:
        if (eps == 0.0) throw ConfigError(eps_field, "must be nonzero (near-resonant detuning)");
        if (c.experiment == Experiment::figure2a && c.ensemble_halfwidth <= 0.0)
            throw ConfigError("ensemble_halfwidth", "figure2a needs a nonzero ensemble width");
        break;
    case Experiment::figure2b:
        if (eps == 0.0) throw ConfigError(eps_field, "must be nonzero (near-resonant detuning)");
        break;
    case Experiment::sweep:
        if (c.sweep_epsilons.empty()) throw ConfigError("sweep_epsilons", "must list at least one detuning");
        for (double e : c.sweep_epsilons)
            if (e == 0.0) throw ConfigError("sweep_epsilons", "detunings must be nonzero");
        if (c.k1 == c.k2) throw ConfigError("k2", "sweep needs k1 != k2 (no beating otherwise)");
        break;
    }
    if (c.experiment == Experiment::figure1 || c.experiment == Experiment::figure2a ||
        c.experiment == Experiment::sweep)
        if (c.ell != 1) throw ConfigError("ell", "the harmonic laws are formulated for ell = 1");
}

} // namespace rotorlab::experiment
