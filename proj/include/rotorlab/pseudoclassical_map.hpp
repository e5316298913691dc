#pragma once

// The epsilon-classical map of the near-resonant rotor and its resonance
// island geometry.
//
//   theta' = theta + I + pi*ell + tau*beta   (mod 2 pi)
//   I'     = I + ktilde * sin(theta')
//
// The angle is updated first and the kick uses the new angle.

#include "rotorlab/core_model.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rotorlab {

struct MapState {
    double theta = 0; // [0, 2 pi)
    double action = 0;
};

using MapOrbit = std::vector<MapState>;

/// Which of the two kick strengths drives a single-map computation.
enum class Kick { first, second };

/// Map constants for one kick strength.
struct MapParams {
    double advance = 0; // pi*ell + tau*beta
    double ktilde = 0;
    double tau = 0;
    double beta = 0;
    int ell = 1;
};

inline MapParams map_params(const RotorParams& p, Kick which = Kick::first) {
    return MapParams{pi * p.ell() + p.tau() * p.beta(), which == Kick::first ? p.ktilde1() : p.ktilde2(), p.tau(),
                     p.beta(), p.ell()};
}

inline double wrap_angle(double theta) {
    double r = std::fmod(theta, two_pi);
    if (r < 0.0) r += two_pi;
    return r >= two_pi ? 0.0 : r;
}

/// Signed angular difference a - b reduced into (-pi, pi].
inline double angle_difference(double a, double b) {
    double d = std::remainder(a - b, two_pi);
    return d <= -pi ? d + two_pi : d;
}

inline MapState map_step(const MapState& s, const MapParams& m) {
    const double theta = wrap_angle(s.theta + s.action + m.advance);
    return {theta, s.action + m.ktilde * std::sin(theta)};
}

inline MapState map_step(const MapState& s, const RotorParams& p, Kick which = Kick::first) {
    return map_step(s, map_params(p, which));
}

/// Exact inverse of map_step: undo the kick with the current angle, then the rotation.
inline MapState map_step_inverse(const MapState& s, const MapParams& m) {
    const double action = s.action - m.ktilde * std::sin(s.theta);
    return {wrap_angle(s.theta - action - m.advance), action};
}

inline MapOrbit iterate_orbit(const MapState& s0, const MapParams& m, int t) {
    if (t < 0) throw std::invalid_argument("t must be >= 0");
    MapOrbit orbit;
    orbit.reserve(static_cast<std::size_t>(t) + 1);
    orbit.push_back({wrap_angle(s0.theta), s0.action});
    for (int i = 0; i < t; ++i) orbit.push_back(map_step(orbit.back(), m));
    return orbit;
}

inline MapOrbit iterate_orbit(const MapState& s0, const RotorParams& p, int t, Kick which = Kick::first) {
    return iterate_orbit(s0, map_params(p, which), t);
}

struct IslandGeometry {
    int index = 0;                           // m in I_res = (2m + ell) pi - tau beta
    double center_action = 0;                // I_res
    double center_theta = pi;                // elliptic point
    double halfwidth_action = 0;             // separatrix halfwidth 2 sqrt(ktilde)
    double halfwidth_beta = 0;               // same, in quasi-momentum units
    double libration_frequency_center = 0;   // sqrt(ktilde)
    double min_half_period = 0;              // pi / sqrt(ktilde)
};

inline double island_center_action(const MapParams& m, int index) {
    return (2.0 * index + m.ell) * pi - m.tau * m.beta;
}

/// Index of the island whose centre is closest to `action`.
inline int nearest_island(const MapParams& m, double action) {
    return static_cast<int>(std::lround((action + m.tau * m.beta - m.ell * pi) / two_pi));
}

inline IslandGeometry island_geometry(const MapParams& m, int index) {
    if (!(m.ktilde > 0.0)) throw std::invalid_argument("island geometry needs a nonzero kick (epsilon != 0, k > 0)");
    IslandGeometry g;
    g.index = index;
    g.center_action = island_center_action(m, index);
    g.libration_frequency_center = std::sqrt(m.ktilde);
    g.halfwidth_action = 2.0 * g.libration_frequency_center;
    g.halfwidth_beta = g.halfwidth_action / m.tau;
    g.min_half_period = pi / g.libration_frequency_center;
    return g;
}

inline IslandGeometry island_geometry(const RotorParams& p, int index, Kick which = Kick::first) {
    if (p.epsilon() == 0.0) throw std::invalid_argument("island geometry needs epsilon != 0");
    return island_geometry(map_params(p, which), index);
}

/// Island astride I = 0 (the one containing the initial momentum state).
inline IslandGeometry central_island(const RotorParams& p, Kick which = Kick::first) {
    const MapParams m = map_params(p, which);
    return island_geometry(p, nearest_island(m, 0.0), which);
}

/// Halfwidth in beta of the narrower of the two islands (k1 vs k2).
inline double min_island_halfwidth_beta(const RotorParams& p) {
    return std::min(central_island(p, Kick::first).halfwidth_beta, central_island(p, Kick::second).halfwidth_beta);
}

enum class Motion { librational, rotational, near_separatrix };

inline constexpr double default_separatrix_tol = 0.02;

/// Pendulum energy relative to the nearest island centre; the separatrix sits at +ktilde.
inline double pendulum_energy(const MapState& s, const MapParams& m) {
    const double d = s.action - island_center_action(m, nearest_island(m, s.action));
    return 0.5 * d * d + m.ktilde * std::cos(s.theta);
}

inline Motion classify_motion(const MapState& s, const MapParams& m, double sep_tol = default_separatrix_tol) {
    const double h = pendulum_energy(s, m);
    if (std::abs(h - m.ktilde) < sep_tol * m.ktilde) return Motion::near_separatrix;
    return h < m.ktilde ? Motion::librational : Motion::rotational;
}

inline Motion classify_motion(const MapState& s, const RotorParams& p, Kick which = Kick::first) {
    return classify_motion(s, map_params(p, which));
}

inline std::string_view to_string(Motion m) {
    switch (m) {
    case Motion::librational: return "librational";
    case Motion::rotational: return "rotational";
    case Motion::near_separatrix: return "near_separatrix";
    }
    return "unknown";
}

} // namespace rotorlab
