#include "rotorlab/pseudoclassical_map.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace rotorlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const RotorParams baseline = RotorParams::from_detuning(0.01, 1, 0.8 * pi, 0.6 * pi, 0.5);

double jacobian_det(const MapState& s, const MapParams& m, double h) {
    const auto diff = [&](const MapState& a, const MapState& b) {
        return std::pair{angle_difference(a.theta, b.theta), a.action - b.action};
    };
    const auto [dth_th, dI_th] = diff(map_step({s.theta + h, s.action}, m), map_step({s.theta - h, s.action}, m));
    const auto [dth_I, dI_I] = diff(map_step({s.theta, s.action + h}, m), map_step({s.theta, s.action - h}, m));
    return (dth_th * dI_I - dth_I * dI_th) / (4.0 * h * h);
}

} // namespace

TEST_CASE("angle helpers", "[map]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK_THAT(wrap_angle(-0.5), WithinAbs(two_pi - 0.5, 1e-15));
    CHECK_THAT(wrap_angle(7.0), WithinAbs(7.0 - two_pi, 1e-15));
    CHECK(wrap_angle(-1e-300) < two_pi);
    CHECK_THAT(angle_difference(0.1, two_pi - 0.1), WithinAbs(0.2, 1e-15));
    CHECK_THAT(angle_difference(pi, -pi), WithinAbs(0.0, 1e-15));
}

TEST_CASE("without a kick the action is conserved", "[map]") {
    const auto p = baseline.with_kicks(0.0, 0.0);
    const auto m = map_params(p);
    const auto orbit = iterate_orbit({1.0, 0.3}, p, 100);
    REQUIRE(orbit.size() == 101);
    for (std::size_t i = 1; i < orbit.size(); ++i) {
        CHECK(orbit[i].action == 0.3);
        CHECK_THAT(angle_difference(orbit[i].theta, orbit[i - 1].theta + 0.3 + m.advance), WithinAbs(0.0, 1e-12));
    }
    CHECK(iterate_orbit({1.0, 0.3}, p, 0).size() == 1);
    CHECK_THROWS_AS(iterate_orbit({1.0, 0.3}, p, -1), std::invalid_argument);
}

TEST_CASE("substitution example: a full-turn advance", "[map]") {
    // ell = 1 and tau beta = pi make the advance exactly 2 pi.
    const double tau = two_pi + 0.01;
    MapParams m{pi + pi, 0.02, tau, pi / tau, 1};
    for (double th : {0.3, 1.7, 4.0}) {
        const auto s = map_step({th, 0.0}, m);
        CHECK_THAT(angle_difference(s.theta, th), WithinAbs(0.0, 1e-14));
        CHECK_THAT(s.action, WithinAbs(0.02 * std::sin(th), 1e-15));
    }
}

TEST_CASE("the island centre is a fixed point", "[map]") {
    for (double beta : {0.5, 0.47, 0.8}) {
        const auto p = baseline.with_beta(beta);
        const auto g = central_island(p);
        const auto orbit = iterate_orbit({g.center_theta, g.center_action}, p, 1000);
        for (const auto& s : orbit) {
            CHECK_THAT(angle_difference(s.theta, pi), WithinAbs(0.0, 1e-10));
            CHECK_THAT(s.action, WithinAbs(g.center_action, 1e-10));
        }
    }
}

TEST_CASE("one step preserves area", "[map][property]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> th(0.0, two_pi), act(-3.0, 3.0);
    for (double ktilde : {map_params(baseline).ktilde, 1.0, 5.0}) {
        MapParams m = map_params(baseline);
        m.ktilde = ktilde;
        for (int i = 0; i < 100; ++i) {
            const MapState s{th(rng), act(rng)};
            CHECK_THAT(jacobian_det(s, m, 1e-6), WithinAbs(1.0, 1e-8));
        }
    }
}

TEST_CASE("the inverse undoes the step", "[map][property]") {
    const auto m = map_params(baseline);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> th(0.0, two_pi), act(-0.4, 0.4);
    for (int trial = 0; trial < 20; ++trial) {
        const MapState s0{th(rng), act(rng)};
        const int t = 1000;
        MapState s = iterate_orbit(s0, m, t).back();
        for (int i = 0; i < t; ++i) s = map_step_inverse(s, m);
        CHECK(std::abs(angle_difference(s.theta, s0.theta)) < 1e-10 * t);
        CHECK(std::abs(s.action - s0.action) < 1e-10 * t);
    }
}

TEST_CASE("orbits inside the island stay inside", "[map][property]") {
    const auto m = map_params(baseline);
    const auto g = central_island(baseline);
    const double margin = 0.1 * g.halfwidth_action;
    for (double frac : {0.1, 0.4, 0.7}) {
        const MapState s0{pi, g.center_action + frac * g.halfwidth_action};
        REQUIRE(classify_motion(s0, m) == Motion::librational);
        const auto orbit = iterate_orbit(s0, m, 10000);
        double worst = 0.0;
        for (const auto& s : orbit) worst = std::max(worst, std::abs(s.action - g.center_action));
        CHECK(worst <= g.halfwidth_action + margin);

        // Running mean of the pendulum energy over the first and last hundred of 10^3 steps.
        double head = 0.0, tail = 0.0;
        for (int i = 0; i < 100; ++i) {
            head += pendulum_energy(orbit[i], m) / 100.0;
            tail += pendulum_energy(orbit[900 + i], m) / 100.0;
        }
        CHECK(std::abs(tail - head) < 0.05 * m.ktilde);
    }
}

TEST_CASE("motion classification", "[map]") {
    const auto m = map_params(baseline);
    const auto g = central_island(baseline);
    CHECK(classify_motion({pi, g.center_action}, m) == Motion::librational);
    CHECK(classify_motion({pi, g.center_action + 3.0 * g.halfwidth_action}, m) == Motion::rotational);
    CHECK(classify_motion({0.0, g.center_action}, m) == Motion::near_separatrix);
    CHECK(classify_motion({pi, g.center_action + g.halfwidth_action}, m) == Motion::near_separatrix);
    CHECK(to_string(Motion::rotational) == "rotational");
}

TEST_CASE("ensemble members inside the island librate", "[map][property]") {
    const auto g = central_island(baseline);
    const double b = 0.9 * g.halfwidth_beta;
    for (int j = 0; j < 101; ++j) {
        const double beta = 0.5 - b + 2.0 * b * j / 100.0;
        // Every member starts in the zero-momentum state, at the elliptic angle.
        CHECK(classify_motion(MapState{pi, 0.0}, baseline.with_beta(beta)) == Motion::librational);
    }
    CHECK(classify_motion(MapState{pi, 0.0}, baseline.with_beta(0.5 + 1.2 * g.halfwidth_beta)) == Motion::rotational);
}

TEST_CASE("island geometry at the baseline parameters", "[map]") {
    const auto g = central_island(baseline);
    CHECK(g.index == 0);
    CHECK_THAT(g.center_action, WithinAbs(pi - (two_pi + 0.01) * 0.5, 1e-15));
    CHECK_THAT(g.center_action, WithinAbs(0.0, 0.01));
    CHECK_THAT(g.halfwidth_action, WithinAbs(2.0 * std::sqrt(0.008 * pi), 1e-15));
    CHECK(g.halfwidth_action > 0.30);
    CHECK(g.halfwidth_action < 0.33);
    CHECK_THAT(g.halfwidth_beta, WithinAbs(0.0505, 5e-4));
    CHECK_THAT(g.halfwidth_beta, WithinRel(g.halfwidth_action / baseline.tau(), 1e-15));
    CHECK_THAT(g.min_half_period, WithinAbs(19.8, 0.05));
    CHECK_THAT(g.min_half_period * g.libration_frequency_center, WithinAbs(pi, 1e-14));
    CHECK(min_island_halfwidth_beta(baseline) == central_island(baseline, Kick::second).halfwidth_beta);

    const auto other = island_geometry(baseline, 1);
    CHECK_THAT(other.center_action - g.center_action, WithinAbs(two_pi, 1e-14));
    CHECK(nearest_island(map_params(baseline), 6.0) == 1);
    CHECK_THROWS_AS(central_island(baseline.with_kicks(0.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(central_island(RotorParams::from_detuning(0.0, 1, 1.0, 1.0, 0.5)), std::invalid_argument);
}
