#include "rotorlab/analytic.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rotorlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const RotorParams baseline = RotorParams::from_detuning(0.01, 1, 0.8 * pi, 0.6 * pi, 0.5);

} // namespace

TEST_CASE("exact resonance law", "[analytic]") {
    const auto p = RotorParams::from_detuning(0.0, 1, 0.8 * pi, 0.6 * pi, 0.5);
    for (int t = 0; t <= 60; ++t) {
        const double j = oracle::j0_series(t * p.delta_k());
        CHECK_THAT(exact_resonance_fidelity(p, t), WithinAbs(j * j, 1e-13));
    }
    // Generic beta: |W_t| from the closed form.
    const auto q = p.with_beta(0.3);
    for (int t : {1, 2, 7, 20}) {
        const double w = std::abs(std::sin(pi * t * (0.3 - 0.5)) / std::sin(pi * (0.3 - 0.5)));
        const double j = oracle::j0_series(w * p.delta_k());
        CHECK_THAT(exact_resonance_fidelity(q, t), WithinAbs(j * j, 1e-13));
    }
    CHECK(exact_resonance_fidelity(p.with_kicks(1.0, 1.0), 37) == 1.0);
    CHECK(exact_resonance_fidelity(p, 0) == 1.0);
    CHECK_THROWS_AS(exact_resonance_fidelity(baseline, 3), std::invalid_argument);
}

TEST_CASE("resonant weight is continuous through the resonant beta", "[analytic]") {
    for (int t : {1, 5, 50}) {
        CHECK(resonant_weight(1, 0.5, t) == t);
        CHECK_THAT(resonant_weight(1, 0.5 + 1e-9, t), WithinRel(static_cast<double>(t), 1e-12));
        CHECK_THAT(resonant_weight(1, 0.5 + 2e-6, t), WithinRel(static_cast<double>(t), 1e-6));
    }
    // ell = 2 is resonant at beta = 0 as well.
    CHECK(resonant_weight(2, 0.0, 9) == 9.0);
}

TEST_CASE("short-time law reduces to the resonant law at bbar = 0", "[analytic]") {
    const auto exact = RotorParams::from_detuning(0.0, 1, 0.8 * pi, 0.6 * pi, 0.5);
    // With epsilon != 0 and beta = 1/2, bbar = 0.
    for (int t = 0; t <= 1000; ++t)
        CHECK_THAT(pseudoclassical_fidelity(baseline, t), WithinAbs(exact_resonance_fidelity(exact, t), 1e-14));
}

TEST_CASE("short-time law at beta = 0.55, t = 10", "[analytic][oracle]") {
    const auto p = baseline.with_beta(0.55);
    const double bbar = (2.0 * pi + 0.01) * 0.05;
    CHECK_THAT(p.beta_bar(), WithinAbs(bbar, 1e-15));
    const double arg = 2.0 * (-0.2 * pi / bbar) * std::sin(bbar * 10.0 / 2.0);
    const double j = oracle::j0_series(arg);
    CHECK_THAT(pseudoclassical_fidelity(p, 10), WithinAbs(j * j, 1e-14));
    // Frozen regression value.
    CHECK_THAT(pseudoclassical_fidelity(p, 10), WithinAbs(0.158056088545951, 1e-12));
    CHECK(pseudoclassical_fidelity(p.with_kicks(2.0, 2.0), 10) == 1.0);
    CHECK_THROWS_AS(pseudoclassical_fidelity(RotorParams::from_detuning(0.0, 1, 1.0, 2.0, 0.55), 1),
                    std::invalid_argument);
}

TEST_CASE("harmonic coefficients", "[analytic]") {
    const auto h0 = harmonic_coefficients(baseline, 0.0);
    CHECK(h0.A == 0.0);
    CHECK(h0.B == 0.0);
    CHECK(h0.C == 0.0);
    CHECK_FALSE(h0.singular);
    // cos(w1 t) = 0 at t = pi / (2 w1).
    const auto hs = harmonic_coefficients(baseline, pi / (2.0 * baseline.omega1()));
    CHECK(hs.singular);
}

TEST_CASE("coefficient route matches the re-derived closed form", "[analytic]") {
    // From A, B, C: (CA - B^2) cos cos = (4 w1 w2 - w+^2 cos(w- t) + w-^2 cos(w+ t)) / (2 w1 w2).
    const double w1 = baseline.omega1(), w2 = baseline.omega2();
    const double wp = w1 + w2, wm = w1 - w2;
    const double b = 0.025;
    for (double t = 0.7; t < 650.0; t += 3.13) {
        const auto s = harmonic_ensemble_fidelity_from_coefficients(baseline, b, t);
        if (s.singular) continue;
        const double d = 4.0 * w1 * w2 - wp * wp * std::cos(wm * t) + wm * wm * std::cos(wp * t);
        const double expect = 0.01 * 0.01 * w1 * w2 / (8.0 * pi * pi * b * b * std::abs(d));
        CHECK_THAT(s.value, WithinRel(expect, 1e-8));
    }
}

TEST_CASE("harmonic laws flag their singular times", "[analytic]") {
    const double w1 = baseline.omega1(), w2 = baseline.omega2();
    CHECK(harmonic_resonant_fidelity(baseline, 0.0).singular);
    CHECK(std::isinf(harmonic_resonant_fidelity(baseline, 0.0).value));
    // As printed, the ensemble divisor does not vanish at t = 0.
    CHECK_THAT(ensemble_divisor(w1, w2, 0.0), WithinAbs(-2.0 * (w1 - w2) * (w1 - w2), 1e-15));
    CHECK_FALSE(harmonic_resonant_fidelity(baseline, 37.3).singular);
    CHECK(resonant_divisor(w1, w2, 0.0) == 0.0);
    // Divisor of the ensemble law at cos(w- t) = 1 reduces to w-^2 (1 + cos(w+ t)) up to sign.
    const double t12 = 2.0 * pi / (w1 - w2);
    CHECK_THAT(std::abs(ensemble_divisor(w1, w2, t12)),
               WithinAbs(std::abs(-(w1 - w2) * (w1 - w2) * (1.0 + std::cos((w1 + w2) * t12))), 1e-15));
}

TEST_CASE("equal kicks short-circuit to one", "[analytic]") {
    const auto same = baseline.with_kicks(2.0, 2.0);
    CHECK(harmonic_resonant_fidelity(same, 12.0).value == 1.0);
    CHECK(harmonic_ensemble_fidelity(same, 0.01, 12.0).value == 1.0);
}

TEST_CASE("ensemble and resonant laws scale differently", "[analytic][property]") {
    const double t = 57.0;
    const double b = 0.02;
    const auto f_ens = [&](double eps, double bb, double tt) {
        return harmonic_ensemble_fidelity(RotorParams::from_detuning(eps, 1, 0.8 * pi, 0.6 * pi, 0.5), bb, tt).value;
    };
    const auto f_res = [&](double eps, double tt) {
        return harmonic_resonant_fidelity(RotorParams::from_detuning(eps, 1, 0.8 * pi, 0.6 * pi, 0.5), tt).value;
    };
    // F_ens ~ 1/b^2 at fixed everything else.
    CHECK_THAT(f_ens(0.01, b / 2.0, t), WithinRel(4.0 * f_ens(0.01, b, t), 1e-12));
    // eps -> lambda eps with t -> t / sqrt(lambda) keeps w t fixed: F_ens ~ eps^2, F_res ~ sqrt(eps).
    const double lambda = 0.25;
    const double ts = t / std::sqrt(lambda);
    CHECK_THAT(f_ens(0.01 * lambda, b, ts), WithinRel(lambda * lambda * f_ens(0.01, b, t), 1e-9));
    CHECK_THAT(f_res(0.01 * lambda, ts), WithinRel(std::sqrt(lambda) * f_res(0.01, t), 1e-9));
    CHECK_THAT(f_ens(0.01 * lambda, b, ts) / f_res(0.01 * lambda, ts),
               WithinRel(std::pow(lambda, 1.5) * f_ens(0.01, b, t) / f_res(0.01, t), 1e-9));
}

TEST_CASE("analytic laws are symmetric in the kicks", "[analytic][property]") {
    const auto sw = baseline.swapped();
    for (double t = 1.0; t < 600.0; t += 7.7) {
        CHECK_THAT(harmonic_resonant_fidelity(sw, t).value, WithinRel(harmonic_resonant_fidelity(baseline, t).value, 1e-12));
        CHECK_THAT(harmonic_ensemble_fidelity(sw, 0.025, t).value,
                   WithinRel(harmonic_ensemble_fidelity(baseline, 0.025, t).value, 1e-12));
    }
    for (int t = 0; t < 30; ++t) {
        const auto p = baseline.with_beta(0.53);
        CHECK_THAT(pseudoclassical_fidelity(p.swapped(), t), WithinAbs(pseudoclassical_fidelity(p, t), 1e-15));
    }
}

TEST_CASE("ensemble width is checked against the island", "[analytic]") {
    CHECK_THROWS_AS(check_ensemble_width(baseline, 0.06), OutsideIsland);
    CHECK_THROWS_AS(harmonic_ensemble_fidelity(baseline, 0.06, 10.0), OutsideIsland);
    const auto w = check_ensemble_width(baseline, 0.025);
    CHECK(w.size() == 1);
    // Strong kicks widen the island enough for epsilon << b^2 inside it.
    CHECK(check_ensemble_width(RotorParams::from_detuning(1e-4, 1, 40.0, 30.0, 0.5), 0.015).empty());
    CHECK_THROWS_AS(check_ensemble_width(baseline, 0.0), std::invalid_argument);
}

TEST_CASE("sampling keeps singular flags", "[analytic]") {
    const auto c = sample_analytic([](double t) { return harmonic_resonant_fidelity(baseline, t); }, 0.0, 10.0, 4,
                                   CurveKind::analytic_harmonic_resonant);
    CHECK(c.size() == 41);
    CHECK(c.is_singular(0));
    CHECK(c.times[4] == 1.0);
    CHECK_NOTHROW(c.validate());
}
