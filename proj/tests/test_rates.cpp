#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "secrecy/errors.hpp"
#include "secrecy/policies.hpp"
#include "secrecy/rates.hpp"

using namespace secrecy;

namespace {

// Nested adaptive quadrature of the gated positive-part secrecy integrand.
// Shares nothing with the closed form under test.
double onoff_quadrature(const RayleighFadingPair& model, double p_bar, double tau) {
    const OnOffPolicy pol = make_onoff(model, {p_bar}, tau);
    auto outer = [&](double hm) {
        auto inner = [&](double he) {
            return (std::log1p(hm * pol.p_const) - std::log1p(he * pol.p_const)) *
                   model.pdf_e(he);
        };
        // the bracket is positive exactly on he < hm, zero elsewhere
        const double eve = integrate_1d(inner, 0.0, hm, Tolerance{1e-10, 1e-15, 0}).value;
        return eve * model.pdf_m(hm);
    };
    const double hi = model.quantile_m(1.0 - 1e-11);
    return integrate_1d(outer, tau, hi, Tolerance{1e-9, 1e-14, 40000}).value;
}

ConstantRatePolicy flat_policy(const RayleighFadingPair& model, double p_bar) {
    const int n = 256;
    std::vector<double> h(n), p(n, p_bar);
    const double lo = model.quantile_m(1e-9);
    const double hi = model.quantile_m(1.0 - 1e-9);
    for (int i = 0; i < n; ++i)
        h[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    MonotoneCubic interp(h, p);
    return ConstantRatePolicy{model, p_bar, 0.0,  0.0, p_bar, 0.0,
                              true,  0,     h,    p,   interp};
}

}  // namespace

TEST_CASE("onoff_rate_closed_form frozen values") {
    CHECK(onoff_rate_closed_form(RayleighFadingPair(1.0, 1.0), {1.0}, 0.5) ==
          doctest::Approx(0.2851138631431503).epsilon(1e-12));
    CHECK(onoff_rate_closed_form(RayleighFadingPair(1.0, 2.0), {10.0}, 0.228632533299) ==
          doctest::Approx(0.32028789098932585).epsilon(1e-12));
    CHECK(onoff_rate_closed_form(RayleighFadingPair(2.0, 1.0), {0.3}, 1.7) ==
          doctest::Approx(0.32844812726384411).epsilon(1e-12));
    CHECK(onoff_rate_closed_form(RayleighFadingPair(0.5, 3.0), {100.0}, 0.05) ==
          doctest::Approx(0.14333547972792723).epsilon(1e-12));
    CHECK(onoff_rate_closed_form(RayleighFadingPair(1.0, 1.0), {10000.0}, 0.0) ==
          doctest::Approx(0.69232235938013554).epsilon(1e-12));
    CHECK(onoff_rate_closed_form(RayleighFadingPair(3.0, 0.25), {5.0}, 2.0) ==
          doctest::Approx(1.4061897164540627).epsilon(1e-12));
}

TEST_CASE("onoff_rate_closed_form agrees with nested quadrature") {
    const RayleighFadingPair a(1.0, 1.0);
    CHECK(onoff_rate_closed_form(a, {1.0}, 0.5) ==
          doctest::Approx(onoff_quadrature(a, 1.0, 0.5)).epsilon(1e-7));
    const RayleighFadingPair b(2.0, 0.7);
    CHECK(onoff_rate_closed_form(b, {4.0}, 1.1) ==
          doctest::Approx(onoff_quadrature(b, 4.0, 1.1)).epsilon(1e-7));
}

TEST_CASE("onoff_rate_closed_form limits") {
    const RayleighFadingPair model(1.0, 1.0);
    // gating away nearly all fading states starves the rate
    const double tau_far = model.quantile_m(1.0 - 1e-9);
    CHECK(onoff_rate_closed_form(model, {1.0}, tau_far) < 1e-6);
    // tau = 0 keeps the positive part inside the expectation, so it still
    // dominates the receiver-only value where the positive part sits outside
    const double tau0 = onoff_rate_closed_form(model, {1.0}, 0.0);
    CHECK(tau0 >= receiver_only_rate(model, {1.0}));
    CHECK(tau0 == doctest::Approx(onoff_quadrature(model, 1.0, 0.0)).epsilon(1e-7));
    CHECK_THROWS_AS(onoff_rate_closed_form(model, {1.0}, -0.5), DomainError);
}

TEST_CASE("receiver_only_rate") {
    CHECK(receiver_only_rate(RayleighFadingPair(2.0, 1.0), {10.0}) ==
          doctest::Approx(0.579787805052162).epsilon(1e-12));
    // degraded on average: signed value negative, clamped value zero
    const RayleighFadingPair bad(1.0, 2.0);
    CHECK(receiver_only_rate_signed(bad, {1.0}) < 0.0);
    CHECK(receiver_only_rate(bad, {1.0}) == 0.0);
    CHECK(receiver_only_rate(RayleighFadingPair(1.0, 1.0), {3.0}) == 0.0);

    // quadrature cross-check of the signed difference of ergodic logs
    const RayleighFadingPair m(2.0, 1.0);
    auto ergodic = [&](double gamma) {
        auto f = [&](double h) {
            return std::log1p(10.0 * h) * std::exp(-h / gamma) / gamma;
        };
        return integrate_1d(f, 0.0, -gamma * std::log(1e-12), Tolerance{1e-10, 1e-15, 40000})
            .value;
    };
    CHECK(receiver_only_rate_signed(m, {10.0}) ==
          doctest::Approx(ergodic(2.0) - ergodic(1.0)).epsilon(1e-7));
}

TEST_CASE("high_snr_limit closed form and scale invariance") {
    CHECK(high_snr_limit(RayleighFadingPair(1.0, 1.0)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-8));
    CHECK(high_snr_limit(RayleighFadingPair(1.0, 2.0)) ==
          doctest::Approx(std::log(1.5)).epsilon(1e-8));
    CHECK(high_snr_limit(RayleighFadingPair(3.0, 1.0)) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-8));
    // only the ratio of the two average gains matters
    CHECK(high_snr_limit(RayleighFadingPair(0.4, 0.8)) ==
          doctest::Approx(high_snr_limit(RayleighFadingPair(1.0, 2.0))).epsilon(1e-8));
}

TEST_CASE("full_csi_rate frozen values and bounds") {
    SolverConfig cfg;
    const RayleighFadingPair sym(1.0, 1.0);
    const FullCsiPolicy p1 = solve_full_csi(sym, {1.0}, cfg);
    CHECK(full_csi_rate(p1, cfg) == doctest::Approx(0.367242060078773).epsilon(1e-6));

    const RayleighFadingPair asym(1.0, 2.0);
    const FullCsiPolicy p2 = solve_full_csi(asym, {10.0}, cfg);
    CHECK(full_csi_rate(p2, cfg) == doctest::Approx(0.376455894956247).epsilon(1e-6));

    // vanishing budget: capacity goes to zero with it
    const FullCsiPolicy lean = solve_full_csi(sym, {1e-3}, cfg);
    const double lean_rate = full_csi_rate(lean, cfg);
    CHECK(lean_rate > 0.0);
    CHECK(lean_rate < 1e-2);

    // large budget: pinched between most of the limit and all of it
    const FullCsiPolicy rich = solve_full_csi(sym, {1e4}, cfg);
    const double rich_rate = full_csi_rate(rich, cfg);
    const double limit = high_snr_limit(sym);
    CHECK(rich_rate <= limit * (1 + 1e-9));
    CHECK(rich_rate >= 0.9 * limit);
}

TEST_CASE("main_csi_rate frozen values and internal consistency") {
    SolverConfig cfg;
    const RayleighFadingPair sym(1.0, 1.0);
    const MainCsiPolicy p1 = solve_main_csi(sym, {1.0}, cfg);
    // main_csi_rate evaluates two independent forms and throws on mismatch
    const double r1 = main_csi_rate(p1, cfg);
    CHECK(r1 == doctest::Approx(0.296593935097).epsilon(1e-5));

    const RayleighFadingPair asym(1.0, 2.0);
    const MainCsiPolicy p2 = solve_main_csi(asym, {10.0}, cfg);
    const double r2 = main_csi_rate(p2, cfg);
    CHECK(r2 == doctest::Approx(0.322563987271).epsilon(1e-5));
    CHECK(r2 > 0.0);

    // grid refinement no longer moves the value at this resolution
    SolverConfig fine = cfg;
    fine.grid_points = 1024;
    const MainCsiPolicy p1f = solve_main_csi(sym, {1.0}, fine);
    CHECK(main_csi_rate(p1f, fine) == doctest::Approx(r1).epsilon(1e-4));
}

TEST_CASE("scheme ordering at a representative operating point") {
    SolverConfig cfg;
    const RayleighFadingPair model(1.0, 1.0);
    const PowerConstraint budget{1.0};
    const double full = full_csi_rate(solve_full_csi(model, budget, cfg), cfg);
    const double main_r = main_csi_rate(solve_main_csi(model, budget, cfg), cfg);
    const double onoff = optimize_onoff_threshold(model, budget, cfg).rate_nats;
    const double recv = receiver_only_rate(model, budget);
    const double slack = 1e-9;
    CHECK(full >= main_r - slack);
    CHECK(main_r >= onoff - slack);
    CHECK(onoff >= recv - slack);

    const ConstantRatePolicy cr = solve_constant_rate(model, budget, cfg);
    CHECK(cr.converged);
    CHECK(constant_rate_objective(cr, cfg) <= main_r + slack);
}

TEST_CASE("constant_rate_objective of a flat policy reduces to receiver_only") {
    SolverConfig cfg;
    const RayleighFadingPair up(2.0, 1.0);
    const ConstantRatePolicy flat_up = flat_policy(up, 10.0);
    CHECK(constant_rate_objective_signed(flat_up, cfg) ==
          doctest::Approx(receiver_only_rate_signed(up, {10.0})).epsilon(1e-6));

    // degraded direction: signed objective negative, public value clamps
    const RayleighFadingPair down(1.0, 2.0);
    const ConstantRatePolicy flat_down = flat_policy(down, 1.0);
    CHECK(constant_rate_objective_signed(flat_down, cfg) ==
          doctest::Approx(receiver_only_rate_signed(down, {1.0})).epsilon(1e-6));
    bool clamped = false;
    CHECK(constant_rate_objective(flat_down, cfg, &clamped) == 0.0);
    CHECK(clamped);
}

TEST_CASE("scheme names round-trip") {
    for (Scheme s : {Scheme::full_csi, Scheme::main_csi, Scheme::onoff, Scheme::constant_rate,
                     Scheme::receiver_only}) {
        CHECK(scheme_from_string(scheme_to_string(s)) == s);
    }
    CHECK(scheme_to_string(Scheme::onoff) == "onoff");
    CHECK(scheme_from_string("full_csi") == Scheme::full_csi);
    CHECK_THROWS_AS(scheme_from_string("bogus"), DomainError);
    CHECK_THROWS_AS(scheme_from_string(""), DomainError);
}

TEST_CASE("evaluate_scheme populates the report invariants") {
    SolverConfig cfg;
    const RayleighFadingPair model(1.0, 1.0);
    const PowerConstraint budget{1.0};
    for (Scheme s : {Scheme::full_csi, Scheme::main_csi, Scheme::onoff, Scheme::constant_rate,
                     Scheme::receiver_only}) {
        const SchemeEvaluation ev = evaluate_scheme(s, model, budget, cfg);
        CHECK(ev.scheme == s);
        CHECK(ev.p_bar == 1.0);
        CHECK(ev.rate_nats >= 0.0);
        CHECK(ev.realized_power <= 1.0 * (1 + 1e-4));
        CHECK(ev.converged);
        if (s == Scheme::full_csi || s == Scheme::main_csi || s == Scheme::constant_rate) {
            CHECK(ev.lambda > 0.0);
            CHECK(ev.realized_power == doctest::Approx(1.0).epsilon(1e-4));
        }
        if (s == Scheme::onoff) {
            CHECK(ev.tau > 0.0);
            CHECK(ev.realized_power == 1.0);
        }
        if (s == Scheme::receiver_only) CHECK(ev.realized_power == 1.0);
    }
}

TEST_CASE("evaluate_onoff_fixed_tau") {
    SolverConfig cfg;
    const RayleighFadingPair model(1.0, 1.0);
    const SchemeEvaluation ev = evaluate_onoff_fixed_tau(model, {1.0}, 0.5, cfg);
    CHECK(ev.scheme == Scheme::onoff);
    CHECK(ev.tau == 0.5);
    CHECK(ev.rate_nats == doctest::Approx(0.2851138631431503).epsilon(1e-12));
    CHECK(ev.realized_power == 1.0);
    CHECK_THROWS_AS(evaluate_onoff_fixed_tau(model, {1.0}, -1.0, cfg), DomainError);
}
