#include "secrecy/policies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "secrecy/errors.hpp"
#include "secrecy/rates.hpp"

namespace secrecy {

namespace {

void require_p_bar(const PowerConstraint& constraint) {
    if (!(constraint.p_bar > 0.0) || !std::isfinite(constraint.p_bar)) {
        throw DomainError("PowerConstraint: p_bar must be finite and > 0");
    }
}

std::vector<double> log_spaced_grid(double lo, double hi, int n) {
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / (n - 1);
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = std::exp(a + step * i);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

// Solves avg_power(lambda) = p_bar for the dual variable. Average power is
// strictly decreasing in lambda, so a sign change brackets the root; the
// bracket starts at [1e-8, 1e4] and expands geometrically.
struct DualResult {
    double lambda = 0.0;
    double realized = 0.0;
    long evaluations = 0;
};

DualResult solve_dual(const std::function<double(double)>& avg_power, double p_bar,
                      const SolverConfig& cfg, const std::string& who) {
    long evals = 0;
    auto avg = [&](double lambda) {
        ++evals;
        return avg_power(lambda);
    };
    double lo = 1e-8;
    double hi = 1e4;
    double f_lo = avg(lo);
    int guard = 0;
    while (f_lo < p_bar) {
        if (++guard > 48) {
            throw ConvergenceError(who + ": no dual bracket below lambda_min", lo, p_bar - f_lo);
        }
        lo /= 16.0;
        f_lo = avg(lo);
    }
    double f_hi = avg(hi);
    guard = 0;
    while (f_hi > p_bar) {
        if (++guard > 48) {
            throw ConvergenceError(who + ": no dual bracket above lambda_max", hi, f_hi - p_bar);
        }
        hi *= 16.0;
        f_hi = avg(hi);
    }
    // Root-find on ln(lambda): the dual spans decades and the power curve is
    // close to log-convex, which keeps the secant steps sane.
    auto gap = [&](double t) { return avg(std::exp(t)) - p_bar; };
    const Tolerance tol{1e-13, cfg.lambda_tol * p_bar, 250};
    const double t = find_root_bracketed(gap, std::log(lo), std::log(hi), tol);
    DualResult out;
    out.lambda = std::exp(t);
    out.realized = avg(out.lambda);
    out.evaluations = evals;
    return out;
}

// Phi'(P) for the main-CSI per-state objective
//   Phi(P) = (1 - e^{-h/ge}) log(1+hP) - int_0^h log(1+xP) f_e(x) dx.
// The eavesdropper term J(P) = int_0^h x f_e(x)/(1+xP) dx is evaluated from
// truncated moments for small ge*P (the E1 form cancels badly there) and in
// scaled-E1 form otherwise.
double main_csi_derivative(double h, double power, double ge) {
    const double decay = std::exp(-h / ge);
    const double mass = -std::expm1(-h / ge);  // Pr(h_e < h)
    double j;
    if (ge * power < 1e-4) {
        double moment = mass;  // M_0
        double hk = 1.0;
        double sign_pk = 1.0;
        j = 0.0;
        for (int k = 1; k <= 6; ++k) {
            hk *= h;
            moment = k * ge * moment - hk * decay;  // M_k = k*ge*M_{k-1} - h^k e^{-h/ge}
            j += sign_pk * moment;
            sign_pk *= -power;
        }
    } else {
        const double a = 1.0 / (ge * power);
        const double k_term =
            a * (exp_integral_e1_scaled(a) - decay * exp_integral_e1_scaled(a + h / ge));
        j = (mass - k_term) / power;
    }
    return mass * h / (1.0 + h * power) - j;
}

// E[h_e / (1 + h_e P)] under the eavesdropper density: the shadow price the
// eavesdropper average puts on one more unit of power.
double eve_shadow(double power, double ge) {
    if (power <= 0.0) return ge;
    const double x = ge * power;
    if (x < 1e-4) return ge * (1.0 - 2.0 * x + 6.0 * x * x - 24.0 * x * x * x);
    const double a = 1.0 / x;
    return (1.0 - a * exp_integral_e1_scaled(a)) / power;
}

struct FixedPoint {
    double power = 0.0;
    bool ok = false;
};

// Damped projected fixed point for the constant-rate stationarity condition
//   h/(1+hP) = lambda + E[h_e/(1+h_e P)],  P >= 0.
// The objective is not concave: a state can have a valid zero branch and a
// positive branch at once. The damped iteration selects the branch; a
// bracketed solve on the stationarity gap then polishes the positive case,
// because plain iteration stalls near branch tangency.
FixedPoint constant_rate_fixed_point(double h, double lambda, double ge, double init) {
    double p = std::max(0.0, init);
    for (int it = 0; it < 400; ++it) {
        const double target = std::max(0.0, 1.0 / (lambda + eve_shadow(p, ge)) - 1.0 / h);
        if (target == 0.0 && p <= 1e-12) return {0.0, true};
        const double next = 0.5 * p + 0.5 * target;
        if (std::fabs(next - p) <= 1e-13 * (1.0 + std::fabs(next))) {
            p = next;
            break;
        }
        p = next;
    }
    auto gap = [&](double q) { return h / (1.0 + h * q) - eve_shadow(q, ge) - lambda; };
    const bool zero_valid = gap(0.0) <= 0.0;
    if (p <= 1e-12) return {0.0, zero_valid};
    double fp = gap(p);
    if (fp == 0.0) return {p, true};
    double lo = p;
    double hi = p;
    if (fp < 0.0) {
        // Iterate sits above its root; halve downward until the gap flips.
        for (int k = 0; k < 120 && gap(lo) < 0.0; ++k) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-14) return {0.0, zero_valid};
        }
        if (gap(lo) < 0.0) return {0.0, zero_valid};
    } else {
        for (int k = 0; k < 120 && gap(hi) > 0.0; ++k) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) return {p, false};
        }
        if (gap(hi) > 0.0) return {p, false};
    }
    return {find_root_bracketed(gap, lo, hi, Tolerance{1e-12, 0.0, 200}), true};
}

// Active part of a tabulated policy: index of the first cell that can carry
// power. Cells before it have both endpoints at zero and interpolate to the
// zero function, so they are skipped exactly.
std::size_t first_active_node(const std::vector<double>& grid_p) {
    for (std::size_t i = 0; i < grid_p.size(); ++i) {
        if (grid_p[i] > 0.0) return i == 0 ? 0 : i - 1;
    }
    return grid_p.size();
}

double tabulated_average_power(const std::vector<double>& grid_h,
                               const std::vector<double>& grid_p, const MonotoneCubic& interp,
                               const RayleighFadingPair& model, const SolverConfig& cfg) {
    const std::size_t start = first_active_node(grid_p);
    if (start == grid_p.size()) return 0.0;
    const Tolerance tol{cfg.quad_rel_tol, cfg.quad_abs_tol, 20000};
    auto f = [&](double h) { return std::max(0.0, interp(h)) * model.pdf_m(h); };
    const double core = integrate_1d(f, grid_h[start], grid_h.back(), tol).value;
    // Outside the grid the policy clamps to its end values; tails are analytic.
    const double bottom = std::max(0.0, grid_p.front()) * model.cdf_m(grid_h.front());
    const double top = std::max(0.0, grid_p.back()) * std::exp(-grid_h.back() / model.gamma_m());
    return core + bottom + top;
}

}  // namespace

double full_csi_power(const ChannelState& state, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("full_csi_power: lambda must be finite and > 0");
    }
    if (state.h_m < 0.0 || state.h_e < 0.0) {
        throw DomainError("full_csi_power: negative channel gain");
    }
    // h_e = 0 is a measure-zero limit; the clamp keeps the closed form finite
    // (P tends to 1/lambda - 1/h_m there).
    const double he = std::max(state.h_e, 1e-300);
    if (state.h_m <= he) return 0.0;
    const double x = 1.0 / he - 1.0 / state.h_m;
    // Overflow-safe rearrangement of (sqrt(x^2 + 4x/lambda) - x) / 2 - 1/h_m.
    const double c = 4.0 / lambda;
    const double p = 0.5 * (c / (std::sqrt(1.0 + c / x) + 1.0) - 2.0 / state.h_m);
    return p > 0.0 ? p : 0.0;
}

double full_csi_wedge_expectation(
    const RayleighFadingPair& model, double lambda, const SolverConfig& cfg,
    const std::function<double(const ChannelState&, double)>& g) {
    const double bm = model.quantile_m(cfg.tail_quantile);
    const double be = model.quantile_e(cfg.tail_quantile);
    // The power map is positive exactly on h_m - h_e > lambda.
    if (bm <= lambda) return 0.0;
    const double e_hi = std::min(be, bm - lambda);
    const Tolerance outer_tol{cfg.quad_rel_tol, cfg.quad_abs_tol, 20000};
    const Tolerance inner_tol{0.5 * cfg.quad_rel_tol, 0.01 * cfg.quad_abs_tol, 20000};
    auto outer = [&](double he) {
        auto inner = [&](double hm) {
            const ChannelState state{hm, he};
            return g(state, full_csi_power(state, lambda)) * model.pdf_m(hm);
        };
        return integrate_1d(inner, he + lambda, bm, inner_tol).value * model.pdf_e(he);
    };
    return integrate_1d(outer, 0.0, e_hi, outer_tol).value;
}

FullCsiPolicy solve_full_csi(const RayleighFadingPair& model, const PowerConstraint& constraint,
                             const SolverConfig& cfg) {
    require_p_bar(constraint);
    cfg.validate();
    auto avg_power = [&](double lambda) {
        return full_csi_wedge_expectation(
            model, lambda, cfg, [](const ChannelState&, double p) { return p; });
    };
    const DualResult dual = solve_dual(avg_power, constraint.p_bar, cfg, "solve_full_csi");
    FullCsiPolicy policy{model, constraint.p_bar, dual.lambda, dual.realized, dual.evaluations};
    return policy;
}

double main_csi_power(double h_m, double lambda, const RayleighFadingPair& model, double p_max) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("main_csi_power: lambda must be finite and > 0");
    }
    if (!(h_m >= 0.0) || !std::isfinite(h_m)) {
        throw DomainError("main_csi_power: gain must be finite and >= 0");
    }
    if (h_m == 0.0) return 0.0;
    const double ge = model.gamma_e();
    // Phi'(0+) = h - ge*(1 - e^{-h/ge}); no positive root when it is <= lambda.
    const double slope0 = h_m + ge * std::expm1(-h_m / ge);
    if (slope0 <= lambda) return 0.0;
    auto excess = [&](double p) { return main_csi_derivative(h_m, p, ge) - lambda; };
    // Phi is concave, so Phi' is strictly decreasing and the root is unique.
    // It lies below mass/lambda <= 1/lambda; the expansion is a safety net.
    double hi = std::min(p_max, 1.0 / lambda);
    int guard = 0;
    while (excess(hi) > 0.0) {
        if (hi >= p_max || ++guard > 200) return p_max;
        hi = std::min(p_max, hi * 8.0);
    }
    return find_root_bracketed(excess, 0.0, hi, Tolerance{1e-11, 0.0, 200});
}

double MainCsiPolicy::power(double h_m) const {
    if (h_m <= cutoff || interp.empty()) return 0.0;
    return std::max(0.0, interp(h_m));
}

MainCsiPolicy solve_main_csi(const RayleighFadingPair& model, const PowerConstraint& constraint,
                             const SolverConfig& cfg) {
    require_p_bar(constraint);
    cfg.validate();
    const double p_max = 1e6 * constraint.p_bar;
    const int n = cfg.grid_points;
    const std::vector<double> grid_h =
        log_spaced_grid(model.quantile_m(1e-8), model.quantile_m(1.0 - 1e-8), n);

    auto tabulate = [&](double lambda) {
        std::vector<double> p(grid_h.size());
        for (std::size_t i = 0; i < grid_h.size(); ++i) {
            p[i] = main_csi_power(grid_h[i], lambda, model, p_max);
        }
        return p;
    };
    auto avg_power = [&](double lambda) {
        const std::vector<double> p = tabulate(lambda);
        const MonotoneCubic interp(grid_h, p);
        return tabulated_average_power(grid_h, p, interp, model, cfg);
    };
    const DualResult dual = solve_dual(avg_power, constraint.p_bar, cfg, "solve_main_csi");

    MainCsiPolicy policy{model,
                         constraint.p_bar,
                         dual.lambda,
                         0.0,
                         dual.realized,
                         dual.evaluations,
                         grid_h,
                         tabulate(dual.lambda),
                         MonotoneCubic()};
    policy.interp = MonotoneCubic(policy.grid_h, policy.grid_p);
    // Exact activation threshold: Phi'(0+) is increasing in h, and
    // Phi'(0+) > lambda strictly above ge + lambda.
    const double ge = model.gamma_e();
    auto slope_gap = [&](double h) { return h + ge * std::expm1(-h / ge) - dual.lambda; };
    policy.cutoff = find_root_bracketed(slope_gap, 0.0, ge + dual.lambda, Tolerance{1e-12, 0.0, 200});
    return policy;
}

OnOffPolicy make_onoff(const RayleighFadingPair& model, const PowerConstraint& constraint,
                       double tau) {
    require_p_bar(constraint);
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw DomainError("make_onoff: tau must be finite and >= 0");
    }
    // p_const * Pr(h_m > tau) = p_bar holds exactly by construction.
    return {tau, constraint.p_bar, constraint.p_bar * std::exp(tau / model.gamma_m())};
}

OnOffOptimum optimize_onoff_threshold(const RayleighFadingPair& model,
                                      const PowerConstraint& constraint,
                                      const SolverConfig& cfg) {
    require_p_bar(constraint);
    cfg.validate();
    long evals = 0;
    auto objective = [&](double tau) {
        ++evals;
        return onoff_rate_closed_form(model, constraint, tau);
    };
    const double hi = model.quantile_m(1.0 - 1e-8);
    const ScalarMaximum best =
        maximize_scalar(objective, 0.0, hi, Tolerance{1e-9, 1e-12, 400}, 256);
    return {make_onoff(model, constraint, best.arg), best.value, evals};
}

double ConstantRatePolicy::power(double h_m) const {
    if (h_m <= cutoff || interp.empty()) return 0.0;
    return std::max(0.0, interp(h_m));
}

ConstantRatePolicy solve_constant_rate(const RayleighFadingPair& model,
                                       const PowerConstraint& constraint,
                                       const SolverConfig& cfg) {
    require_p_bar(constraint);
    cfg.validate();
    // The objective is not concave; the KKT system is necessary only. The
    // iteration starts from the concave-problem (main-CSI) solution and the
    // result is reported as a candidate stationary point with residuals.
    const MainCsiPolicy seed = solve_main_csi(model, constraint, cfg);
    const double ge = model.gamma_e();
    constexpr double kSnap = 1e-10;  // projection reaches 0 only in the limit

    long fp_count = 0;

    struct Tabulation {
        std::vector<double> h;
        std::vector<double> p;
        double boundary = 0.0;  // exact activation gain
        bool active = false;
        bool ok = true;
    };

    // The selected stationary branch switches from 0 to a positive root at a
    // single activation gain. A node grid alone turns that switch into power
    // jumps as lambda moves; anchoring the grid at the exact activation gain
    // keeps the averaged power continuous in lambda, which the dual solve
    // needs.
    auto tabulate = [&](double lambda) {
        Tabulation t;
        std::vector<double> base(seed.grid_h.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            const FixedPoint fp =
                constant_rate_fixed_point(seed.grid_h[i], lambda, ge, seed.grid_p[i]);
            ++fp_count;
            if (!fp.ok) t.ok = false;
            base[i] = fp.power > kSnap ? fp.power : 0.0;
        }
        std::size_t j = base.size();
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (base[i] > 0.0) {
                j = i;
                break;
            }
        }
        if (j == base.size()) {
            t.h = seed.grid_h;
            t.p = std::move(base);
            t.boundary = t.h.back();
            return t;
        }
        t.active = true;
        if (j == 0) {
            t.h = seed.grid_h;
            t.p = std::move(base);
            t.boundary = t.h.front();
            return t;
        }
        double lo = seed.grid_h[j - 1];
        double hi = seed.grid_h[j];
        for (int k = 0; k < 100 && hi - lo > 1e-13 * hi; ++k) {
            const double mid = 0.5 * (lo + hi);
            const FixedPoint fp = constant_rate_fixed_point(mid, lambda, ge, seed.power(mid));
            ++fp_count;
            if (!fp.ok) t.ok = false;
            (fp.power > kSnap ? hi : lo) = mid;
        }
        const double boundary = hi;
        // Dense geometric fill across the activation cell: the positive root
        // can rise steeply (square-root-like near branch tangency). Rounding
        // can tie adjacent candidates when the boundary sits against a node,
        // so ties are dropped while assembling.
        const int fill = 32;
        std::vector<double> nodes;
        nodes.push_back(boundary);
        if (seed.grid_h[j] > boundary * (1.0 + 1e-12)) {
            const double step = std::log(seed.grid_h[j] / boundary) / fill;
            for (int k = 1; k < fill; ++k) nodes.push_back(boundary * std::exp(k * step));
        }
        for (std::size_t i = j; i < base.size(); ++i) nodes.push_back(seed.grid_h[i]);
        t.h.reserve(nodes.size());
        t.p.reserve(nodes.size());
        for (double node : nodes) {
            if (!t.h.empty() && node <= t.h.back() * (1.0 + 4e-16)) continue;
            const FixedPoint fp = constant_rate_fixed_point(node, lambda, ge, seed.power(node));
            ++fp_count;
            if (!fp.ok) t.ok = false;
            t.h.push_back(node);
            t.p.push_back(fp.power > kSnap ? fp.power : 0.0);
        }
        t.boundary = boundary;
        return t;
    };

    auto average_of = [&](const Tabulation& t) {
        if (!t.active) return 0.0;
        const MonotoneCubic interp(t.h, t.p);
        const Tolerance tol{cfg.quad_rel_tol, cfg.quad_abs_tol, 20000};
        auto f = [&](double h) { return std::max(0.0, interp(h)) * model.pdf_m(h); };
        // No bottom term: the policy is identically zero below the boundary.
        return integrate_1d(f, t.h.front(), t.h.back(), tol).value +
               std::max(0.0, t.p.back()) * std::exp(-t.h.back() / model.gamma_m());
    };
    auto avg_power = [&](double lambda) { return average_of(tabulate(lambda)); };

    ConstantRatePolicy policy{model, constraint.p_bar, 0.0, 0.0, 0.0, 0.0,
                              false, 0,                {},  {},  MonotoneCubic()};
    bool bracket_ok = true;
    try {
        const DualResult dual = solve_dual(avg_power, constraint.p_bar, cfg, "solve_constant_rate");
        policy.lambda = dual.lambda;
    } catch (const ConvergenceError& e) {
        // Non-convergence is a returned state for this scheme, not an error.
        // Bracket failures report the last multiplier directly; the root
        // iteration works on ln(lambda), so its best estimate is a log.
        bracket_ok = false;
        const bool bracket_failure = std::string(e.what()).find("dual bracket") != std::string::npos;
        policy.lambda = bracket_failure ? e.best_estimate : std::exp(e.best_estimate);
    }
    const Tabulation final_tab = tabulate(policy.lambda);
    policy.grid_h = final_tab.h;
    policy.grid_p = final_tab.p;
    policy.cutoff = final_tab.active ? final_tab.boundary : final_tab.h.back();
    policy.interp = MonotoneCubic(policy.grid_h, policy.grid_p);
    policy.realized_power = average_of(final_tab);
    policy.iterations = fp_count;

    // Stationarity residual: |psi(P) - lambda| where power is positive,
    // [psi(0) - lambda]^+ where it is zero, psi(P) = h/(1+hP) - E[h_e/(1+h_e P)].
    double residual = 0.0;
    for (std::size_t i = 0; i < policy.grid_h.size(); ++i) {
        const double h = policy.grid_h[i];
        const double p = policy.grid_p[i];
        const double psi = h / (1.0 + h * p) - eve_shadow(p, ge);
        const double r =
            p > 0.0 ? std::fabs(psi - policy.lambda) : std::max(0.0, psi - policy.lambda);
        residual = std::max(residual, r);
    }
    policy.kkt_residual = residual;
    policy.converged = final_tab.ok && bracket_ok && residual <= 1e-6 &&
                       std::fabs(policy.realized_power - constraint.p_bar) <=
                           1e-4 * constraint.p_bar;
    return policy;
}

double grid_expectation(const std::vector<double>& grid_h,
                        const std::function<double(double)>& power,
                        const RayleighFadingPair& model, const SolverConfig& cfg,
                        const std::function<double(double, double)>& f) {
    const Tolerance tol{cfg.quad_rel_tol, cfg.quad_abs_tol, 20000};
    const double front = grid_h.front();
    const double back = grid_h.back();
    auto core = [&](double h) { return f(h, std::max(0.0, power(h))) * model.pdf_m(h); };
    // Find the activation point so all-zero leading cells are skipped exactly.
    double start = back;
    for (std::size_t i = 0; i < grid_h.size(); ++i) {
        if (std::max(0.0, power(grid_h[i])) > 0.0) {
            start = i == 0 ? front : grid_h[i - 1];
            break;
        }
    }
    double total = 0.0;
    if (start < back) total += integrate_1d(core, start, back, tol).value;
    if (std::max(0.0, power(front)) > 0.0 || std::max(0.0, power(0.5 * front)) > 0.0) {
        total += integrate_1d(core, 0.0, front, tol).value;
    }
    const double hi = model.quantile_m(cfg.tail_quantile);
    if (std::max(0.0, power(back)) > 0.0 && hi > back) {
        total += integrate_1d(core, back, hi, tol).value;
    }
    return total;
}

}  // namespace secrecy
