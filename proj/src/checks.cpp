#include "secrecy/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <tuple>
#include <vector>

#include "secrecy/errors.hpp"
#include "secrecy/fading.hpp"
#include "secrecy/numerics.hpp"
#include "secrecy/policies.hpp"
#include "secrecy/rates.hpp"
#include "secrecy/sweep.hpp"
#include "secrecy/validation.hpp"

namespace secrecy {

namespace {

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-10});
}

// Direct nested quadrature of the gated positive-part integrand; the oracle
// side of the on/off transcription check.
double onoff_quadrature(const RayleighFadingPair& model, double p_bar, double tau) {
    const OnOffPolicy pol = make_onoff(model, {p_bar}, tau);
    auto outer = [&](double hm) {
        auto inner = [&](double he) {
            return (std::log1p(hm * pol.p_const) - std::log1p(he * pol.p_const)) *
                   model.pdf_e(he);
        };
        return integrate_1d(inner, 0.0, hm, Tolerance{1e-10, 1e-15, 0}).value * model.pdf_m(hm);
    };
    return integrate_1d(outer, tau, model.quantile_m(1.0 - 1e-11), Tolerance{1e-9, 1e-14, 40000})
        .value;
}

// One solved operating point of the shared acceptance grid.
struct GridPoint {
    double gamma_m, gamma_e, p_bar;
    FullCsiPolicy full;
    double full_rate;
    MainCsiPolicy main;
    double main_rate;
    OnOffOptimum onoff;
    double onoff0_rate;
    double recv_rate;
    ConstantRatePolicy constant;
    double constant_signed;
    double constant_clamped;
};

GridPoint make_point(double gm, double ge, double pb, const SolverConfig& cfg) {
    const RayleighFadingPair model(gm, ge);
    FullCsiPolicy full = solve_full_csi(model, {pb}, cfg);
    const double full_rate = full_csi_rate(full, cfg);
    MainCsiPolicy main = solve_main_csi(model, {pb}, cfg);
    const double main_rate = main_csi_rate(main, cfg);
    OnOffOptimum onoff = optimize_onoff_threshold(model, {pb}, cfg);
    const double onoff0 = onoff_rate_closed_form(model, {pb}, 0.0);
    const double recv = receiver_only_rate(model, {pb});
    ConstantRatePolicy constant = solve_constant_rate(model, {pb}, cfg);
    const double csigned = constant_rate_objective_signed(constant, cfg);
    return GridPoint{gm,
                     ge,
                     pb,
                     std::move(full),
                     full_rate,
                     std::move(main),
                     main_rate,
                     std::move(onoff),
                     onoff0,
                     recv,
                     std::move(constant),
                     csigned,
                     std::max(0.0, csigned)};
}

using Clock = std::chrono::steady_clock;

CheckResult timed(const std::string& name, double budget,
                  const std::function<std::pair<bool, std::string>()>& body) {
    CheckResult r;
    r.name = name;
    r.budget_seconds = budget;
    const auto t0 = Clock::now();
    try {
        auto [ok, detail] = body();
        r.passed = ok;
        r.detail = std::move(detail);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.seconds > r.budget_seconds) {
        r.passed = false;
        r.detail += fmt(" [exceeded %.0fs budget]", r.budget_seconds);
    }
    return r;
}

}  // namespace

std::vector<CheckResult> run_check_suite(
    const SolverConfig& cfg, const std::function<void(const CheckResult&)>& on_result) {
    cfg.validate();
    std::vector<CheckResult> results;
    auto push = [&](CheckResult r) {
        if (on_result) on_result(r);
        results.push_back(std::move(r));
    };

    // 1: on/off closed form against nested quadrature, random tuples
    push(timed("onoff closed form vs 2D quadrature (20 random tuples)", 30.0, [&] {
        std::mt19937_64 rng(1234);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const double gm = 0.3 + 2.7 * u01(rng);
            const double ge = 0.3 + 2.7 * u01(rng);
            const double pb = std::exp(std::log(0.1) + u01(rng) * std::log(1000.0));
            const double tau = 2.0 * gm * u01(rng);
            const RayleighFadingPair model(gm, ge);
            const double closed = onoff_rate_closed_form(model, {pb}, tau);
            const double quad = onoff_quadrature(model, pb, tau);
            worst = std::max(worst, rel_diff(closed, quad));
        }
        return std::pair{worst <= 1e-6, fmt("max rel diff %.2e (tol 1e-6)", worst)};
    }));

    // 2: the two main-CSI rate forms agree
    push(timed("main-CSI E1 reduction vs positive-part double integral", 30.0, [&] {
        double worst = 0.0;
        for (auto [gm, ge, pb] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{1.0, 2.0, 10.0}}) {
            const RayleighFadingPair model(gm, ge);
            const MainCsiPolicy pol = solve_main_csi(model, {pb}, cfg);
            const MainCsiRateForms forms = main_csi_rate_forms(pol, cfg);
            worst = std::max(worst, rel_diff(forms.e1_form, forms.quadrature_form));
        }
        return std::pair{worst <= 1e-5, fmt("max rel diff %.2e (tol 1e-5)", worst)};
    }));

    // 3: per-state power closed form against a brute-force maximizer
    push(timed("full-CSI power map vs brute-force Lagrangian maximizer", 10.0, [&] {
        std::mt19937_64 rng(777);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        int active = 0;
        bool ok = true;
        for (int t = 0; t < 200; ++t) {
            const double he = 0.01 + 4.99 * u01(rng);
            const double hm = he + 0.001 + 9.0 * u01(rng);
            const double lambda = std::exp(std::log(1e-3) + u01(rng) * std::log(1e4));
            const double closed = full_csi_power({hm, he}, lambda);
            auto f = [&](double p) {
                return std::log1p(hm * p) - std::log1p(he * p) - lambda * p;
            };
            const double brute =
                maximize_scalar(f, 0.0, 1e4, Tolerance{1e-10, 1e-13, 400}, 4096).arg;
            if (closed > 1e-6) {
                ++active;
                const double rel = std::fabs(closed - brute) / closed;
                worst = std::max(worst, rel);
                ok = ok && rel <= 1e-5;
            } else {
                ok = ok && brute <= 1e-3;
            }
        }
        return std::pair{ok && active >= 50,
                         fmt("max rel diff %.2e on %d active states (tol 1e-5)", worst, active)};
    }));

    // shared acceptance grid used by the ordering / attainment / MC checks
    const double pbars[] = {0.1, 1.0, 10.0, 100.0, 1e4};
    std::vector<GridPoint> grid;
    const auto grid_t0 = Clock::now();
    for (auto [gm, ge] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}})
        for (double pb : pbars) grid.push_back(make_point(gm, ge, pb, cfg));
    const double grid_seconds = std::chrono::duration<double>(Clock::now() - grid_t0).count();

    // 4: high-SNR asymptote laws
    push(timed("high-SNR asymptote and large-budget convergence", 120.0, [&] {
        const RayleighFadingPair sym(1.0, 1.0);
        const double limit = high_snr_limit(sym);
        const double ln2 = std::log(2.0);
        const GridPoint& rich = grid[4];  // (1,1,1e4)
        const double onoff0 = rich.onoff0_rate;
        const double d1 = std::fabs(limit - ln2);
        const bool in_band = rich.full_rate >= 0.9 * ln2 && rich.full_rate <= ln2 + 1e-12;
        const double gap = std::fabs(onoff0 - rich.full_rate) / rich.full_rate;
        return std::pair{d1 <= 1e-6 && in_band && gap <= 0.05,
                         fmt("|limit-ln2|=%.1e; C(1e4)=%.6f in [%.6f,%.6f]; onoff0 gap %.3f%%",
                             d1, rich.full_rate, 0.9 * ln2, ln2, 100 * gap)};
    }));

    // 5: scheme ordering across the grid
    {
        CheckResult r;
        r.name = "scheme ordering across the power grid";
        r.budget_seconds = 300.0;
        const auto t0 = Clock::now();
        bool ok = true;
        std::string bad;
        const double slack = 1e-6;
        for (const GridPoint& g : grid) {
            const bool row_ok = g.full_rate >= g.main_rate - slack &&
                                g.main_rate >= g.onoff.rate_nats - slack &&
                                g.onoff.rate_nats >= g.onoff0_rate - slack &&
                                g.onoff0_rate >= g.recv_rate - slack &&
                                g.constant_clamped <= g.main_rate + slack;
            if (!row_ok) {
                ok = false;
                bad += fmt(" (%g,%g,p=%g)", g.gamma_m, g.gamma_e, g.p_bar);
            }
        }
        r.passed = ok;
        r.detail = ok ? fmt("full>=main>=onoff*>=onoff0>=recv and const<=main at all %zu points",
                            grid.size())
                      : "violated at" + bad;
        r.seconds = grid_seconds + std::chrono::duration<double>(Clock::now() - t0).count();
        if (r.seconds > r.budget_seconds) r.passed = false;
        push(std::move(r));
    }

    // 6: qualitative behavior with the stronger eavesdropper on average
    push(timed("stronger-eavesdropper qualitative behavior", 60.0, [&] {
        bool recv_zero = true;
        for (std::size_t i = 5; i < 10; ++i) recv_zero = recv_zero && grid[i].recv_rate == 0.0;
        const double main_at_10 = grid[7].main_rate;  // (1,2,10)
        return std::pair{recv_zero && main_at_10 > 0.01,
                         fmt("receiver_only=0 at all 5 budgets; main_csi(10)=%.4f > 0.01",
                             main_at_10)};
    }));

    // 7: constraint attainment for every solved policy (bundled with 5's solves)
    push(timed("average power constraint attainment", 300.0, [&] {
        double worst = 0.0;
        for (const GridPoint& g : grid) {
            worst = std::max(worst, std::fabs(g.full.realized_power - g.p_bar) / g.p_bar);
            worst = std::max(worst, std::fabs(g.main.realized_power - g.p_bar) / g.p_bar);
            worst = std::max(worst,
                             std::fabs(g.constant.realized_power - g.p_bar) / g.p_bar);
        }
        return std::pair{worst <= 1e-4, fmt("max |E{P}-pbar|/pbar = %.2e (tol 1e-4)", worst)};
    }));

    // 8: Monte Carlo oracle agreement at (1,1,1) and (1,2,10)
    push(timed("Monte Carlo oracle agreement", 120.0, [&] {
        const long n = static_cast<long>(cfg.mc_samples);
        bool ok = true;
        double worst_z = 0.0;
        for (const GridPoint* gp : {&grid[1], &grid[7]}) {  // (1,1,1) and (1,2,10)
            const RayleighFadingPair model(gp->gamma_m, gp->gamma_e);
            const double pb = gp->p_bar;
            struct Case {
                Scheme scheme;
                double quad;
                std::function<double(const ChannelState&)> power;
            };
            const Case cases[] = {
                {Scheme::full_csi, gp->full_rate,
                 [&](const ChannelState& s) { return gp->full.power(s); }},
                {Scheme::main_csi, gp->main_rate,
                 [&](const ChannelState& s) { return gp->main.power(s.h_m); }},
                {Scheme::onoff, gp->onoff.rate_nats,
                 [&](const ChannelState& s) { return gp->onoff.policy.power(s.h_m); }},
                {Scheme::constant_rate, gp->constant_signed,
                 [&](const ChannelState& s) { return gp->constant.power(s.h_m); }},
                {Scheme::receiver_only, receiver_only_rate_signed(model, {pb}),
                 [pb](const ChannelState&) { return pb; }},
            };
            for (const Case& c : cases) {
                // Same base seed everywhere: mc_rate decorrelates per-chunk
                // internally, and common draws across schemes sharpen the
                // comparison at a fixed operating point.
                const McEstimate mc = mc_rate(c.scheme, model, c.power, n, cfg.mc_seed);
                const double z = c.quad == mc.mean && mc.std_err == 0.0
                                     ? 0.0
                                     : std::fabs(mc.mean - c.quad) / mc.std_err;
                worst_z = std::max(worst_z, z);
                ok = ok && z <= 3.0;
            }
        }
        return std::pair{ok, fmt("max |z| = %.2f over 10 scheme/point pairs (tol 3)", worst_z)};
    }));

    // 9: quantized achievability: lower bound, convergence, truncation
    push(timed("quantized achievability: lower bound, convergence, truncation", 120.0, [&] {
        bool lower_ok = true, conv_ok = true, trunc_ok = true;
        std::string gaps, masses;
        for (const GridPoint* gp : {&grid[1], &grid[6]}) {  // (1,1,1) and (1,2,1)
            const RayleighFadingPair model(gp->gamma_m, gp->gamma_e);
            const double cap = gp->full_rate;
            const QuantizationSpec one{1, 1, model.quantile_m(0.999), model.quantile_e(0.999)};
            lower_ok =
                lower_ok && quantized_achievable_rate(gp->full, one) <= cap + 1e-9;
            const double m1 = model.quantile_m(1.0 - 1e-6);
            const double m2 = model.quantile_e(1.0 - 1e-6);
            double rq = 0.0;
            for (int q : {25, 50, 100, 200}) {
                rq = quantized_achievable_rate(gp->full, {q, q, m1, m2});
                lower_ok = lower_ok && rq <= cap + 1e-9;
            }
            const double gap = (cap - rq) / cap;
            conv_ok = conv_ok && gap <= 0.05;
            gaps += fmt(" %.1f%%", 100 * gap);
            const double mass = truncation_mass(gp->full, {200, 200, m1, m2}, cfg);
            trunc_ok = trunc_ok && mass <= 1e-3;
            masses += fmt(" %.1e", mass);
        }
        return std::pair{lower_ok && conv_ok && trunc_ok,
                         fmt("lower bound %s; (200,200) gaps%s (tol 5%%) %s; tail mass%s "
                             "(tol 1e-3) %s",
                             lower_ok ? "holds" : "VIOLATED", gaps.c_str(),
                             conv_ok ? "ok" : "EXCEEDED", masses.c_str(),
                             trunc_ok ? "ok" : "EXCEEDED")};
    }));

    // 10: byte-level determinism of sweep output and seeded MC
    push(timed("deterministic sweep CSV and seeded MC reproducibility", 60.0, [&] {
        SweepRequest req;
        req.db_start = -10.0;
        req.db_stop = 10.0;
        req.db_step = 5.0;
        SolverConfig par = cfg;
        par.jobs = 4;
        const std::string a = sweep_to_csv(run_sweep(req, par), Unit::nats);
        const std::string b = sweep_to_csv(run_sweep(req, par), Unit::nats);
        SolverConfig ser = cfg;
        ser.jobs = 1;
        const std::string c = sweep_to_csv(run_sweep(req, ser), Unit::nats);
        const RayleighFadingPair model(1.0, 1.0);
        auto unit_power = [](const ChannelState&) { return 1.0; };
        const McEstimate m1 = mc_rate(Scheme::full_csi, model, unit_power, 100000, cfg.mc_seed);
        const McEstimate m2 = mc_rate(Scheme::full_csi, model, unit_power, 100000, cfg.mc_seed);
        const bool ok = a == b && a == c && m1.mean == m2.mean && m1.std_err == m2.std_err;
        return std::pair{ok, fmt("sweep CSV %zu bytes, parallel==parallel==serial: %s; "
                                 "MC bitwise reproducible: %s",
                                 a.size(), a == b && a == c ? "yes" : "NO",
                                 m1.mean == m2.mean ? "yes" : "NO")};
    }));

    return results;
}

}  // namespace secrecy
